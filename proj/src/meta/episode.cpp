#include "omlog/meta/episode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "omlog/errors.hpp"
#include "omlog/features/features.hpp"
#include "omlog/neural/sgd.hpp"

namespace omlog {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void validate(const EpisodeConfig& cfg) {
    if (cfg.tasks_per_batch == 0) throw ConfigError("tasks_per_batch must be at least 1");
    if (cfg.inner_lr < 0.0 || !std::isfinite(cfg.inner_lr)) throw ConfigError("inner_lr must be finite and >= 0");
}

std::size_t required_vocab(std::span<const Sample> samples) {
    std::size_t n = 0;
    for (const auto& s : samples) {
        for (auto e : s.events) n = std::max<std::size_t>(n, std::size_t{e} + 1);
    }
    return n;
}

double median_origin(std::span<const Sample> query) {
    if (query.empty()) throw std::invalid_argument("median of an empty query");
    std::vector<double> idx;
    idx.reserve(query.size());
    for (const auto& s : query) idx.push_back(static_cast<double>(s.origin.window_index));
    std::sort(idx.begin(), idx.end());
    const auto m = idx.size() / 2;
    return idx.size() % 2 ? idx[m] : 0.5 * (idx[m - 1] + idx[m]);
}

std::vector<MetaTask> build_meta_tasks(std::span<const Sample> batch, std::span<const Sample> normals,
                                       const EpisodeConfig& cfg) {
    validate(cfg);
    if (batch.empty()) throw std::invalid_argument("cannot build meta-tasks for an empty batch");
    const std::size_t T = std::min(cfg.tasks_per_batch, batch.size());
    const std::size_t base = batch.size() / T;
    const std::size_t extra = batch.size() % T;

    std::vector<MetaTask> tasks;
    std::size_t begin = 0;
    for (std::size_t t = 0; t < T; ++t) {
        MetaTask task;
        task.index = t;
        task.query_begin = begin;
        task.query_end = begin + base + (t < extra ? 1 : 0);
        begin = task.query_end;

        const double anchor = median_origin(batch.subspan(task.query_begin, task.query_size()));
        std::vector<std::size_t> order(normals.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto dist = [&](std::size_t i) {
            return std::abs(anchor - static_cast<double>(normals[i].origin.window_index));
        };
        // Stable sort keeps the earlier normal first on equal distance.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
        order.resize(std::min(order.size(), cfg.support_size));
        task.support = std::move(order);
        tasks.push_back(std::move(task));
    }
    return tasks;
}

EpisodeResult run_episode(NextEventModel& model, const MetaTask& task, std::span<const Sample> batch,
                          std::span<const Sample> normals, const EpisodeConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    EpisodeResult r;
    std::vector<NextEventPair> pairs;
    for (auto i : task.support) {
        if (i >= normals.size()) throw std::invalid_argument("support index outside the normal set");
        append_next_event_pairs(std::span<const Sample>(&normals[i], 1), model.window(), pairs);
    }
    r.support_pairs = pairs.size();

    if (cfg.inner_lr > 0.0 && !pairs.empty()) {
        auto store = model.parameters();
        const auto snapshot = store.snapshot();
        for (std::size_t e = 0; e < cfg.inner_epochs && !r.aborted; ++e) {
            for (const auto& p : pairs) {
                store.zero_grad();
                double loss = 0.0;
                try {
                    loss = model.loss_and_grad(p.window, p.target);
                } catch (const NumericError&) {
                    loss = NAN;
                }
                if (!std::isfinite(loss) || !store.grads_finite()) {
                    r.aborted = true;
                    break;
                }
                neural::sgd_step(store, cfg.inner_lr);
                ++r.update_steps;
            }
        }
        if (r.aborted || !store.values_finite()) {
            store.restore(snapshot);
            r.aborted = true;
        }
    }

    double loss_sum = 0.0;
    const auto h = model.window();
    for (std::size_t q = task.query_begin; q < task.query_end; ++q) {
        const auto& s = batch[q];
        r.verdicts.push_back(model.score_sample(s));
        const std::span<const EventId> ev(s.events);
        for (std::size_t i = 0; i + h < ev.size(); ++i) {
            loss_sum += model.loss(ev.subspan(i, h), ev[i + h]);
            ++r.query_windows;
        }
    }
    r.loss = r.query_windows ? loss_sum / static_cast<double>(r.query_windows) : 0.0;
    r.seconds = seconds_since(t0);
    return r;
}

TaskBatchResult detect_batch(NextEventModel& model, std::span<const Sample> batch, const NormalityModel& normality,
                             const EpisodeConfig& cfg) {
    TaskBatchResult out;
    if (batch.empty()) return out;
    model.grow_classes(std::max(model.vocab_size(), required_vocab(batch)));
    const auto normals = normality_filter(normality, batch);
    out.filtered_normals = normals.size();

    const auto tasks = build_meta_tasks(batch, normals, cfg);
    out.verdicts.resize(batch.size());
    double loss_sum = 0.0;
    for (const auto& task : tasks) {
        auto r = run_episode(model, task, batch, normals, cfg);
        for (std::size_t q = 0; q < r.verdicts.size(); ++q) out.verdicts[task.query_begin + q] = r.verdicts[q];
        loss_sum += r.loss;
        out.update_steps += r.update_steps;
        out.tasks.push_back({task.index, task.query_size(), task.support.size(), r.loss, r.update_steps, r.aborted,
                             r.seconds});
    }
    out.meta_loss = loss_sum / static_cast<double>(tasks.size());
    return out;
}

}  // namespace omlog
