#include "omlog/pipeline/metrics.hpp"

#include <memory>
#include <stdexcept>

namespace omlog {

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    Metrics m{tp, fp, tn, fn};
    const double dtp = static_cast<double>(tp);
    if (tp + fp == 0) {
        m.precision_undefined = true;
    } else {
        m.precision = dtp / static_cast<double>(tp + fp);
    }
    if (tp + fn == 0) {
        m.recall_undefined = true;
    } else {
        m.recall = dtp / static_cast<double>(tp + fn);
    }
    if (m.precision + m.recall == 0.0) {
        m.f1_undefined = true;
    } else {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return m;
}

Metrics evaluate(std::span<const bool> predicted, std::span<const bool> actual) {
    if (predicted.size() != actual.size()) {
        throw std::invalid_argument("verdict count " + std::to_string(predicted.size()) + " does not match label count " +
                                    std::to_string(actual.size()));
    }
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i]) {
            actual[i] ? ++tp : ++fp;
        } else {
            actual[i] ? ++fn : ++tn;
        }
    }
    return metrics_from_counts(tp, fp, tn, fn);
}

Metrics evaluate(std::span<const DetectionVerdict> verdicts, std::span<const Sample> samples) {
    if (verdicts.size() != samples.size()) {
        throw std::invalid_argument("verdict count " + std::to_string(verdicts.size()) + " does not match sample count " +
                                    std::to_string(samples.size()));
    }
    std::unique_ptr<bool[]> p(new bool[verdicts.size()]), a(new bool[samples.size()]);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        p[i] = verdicts[i].anomalous;
        a[i] = samples[i].is_abnormal();
    }
    return evaluate(std::span<const bool>(p.get(), verdicts.size()), std::span<const bool>(a.get(), samples.size()));
}

nlohmann::json to_json(const Metrics& m) {
    return {{"tp", m.tp},
            {"fp", m.fp},
            {"tn", m.tn},
            {"fn", m.fn},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"precision_undefined", m.precision_undefined},
            {"recall_undefined", m.recall_undefined},
            {"f1_undefined", m.f1_undefined}};
}

}  // namespace omlog
