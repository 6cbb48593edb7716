#pragma once

#include <cstddef>
#include <span>

#include <json.hpp>

#include "omlog/corpus/log_record.hpp"
#include "omlog/detectors/next_event_model.hpp"

namespace omlog {

struct Metrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    // Set when the corresponding denominator was zero and the value defaulted to 0.
    bool precision_undefined = false, recall_undefined = false, f1_undefined = false;

    std::size_t total() const { return tp + fp + tn + fn; }
};

// Derives precision, recall and F1 from the counts.
Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

// Abnormal is the positive class; unlabeled samples count as normal.
Metrics evaluate(std::span<const DetectionVerdict> verdicts, std::span<const Sample> samples);
Metrics evaluate(std::span<const bool> predicted, std::span<const bool> actual);

nlohmann::json to_json(const Metrics& m);

}  // namespace omlog
