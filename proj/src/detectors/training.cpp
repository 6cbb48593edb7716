#include "omlog/detectors/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "omlog/errors.hpp"
#include "omlog/neural/checkpoint.hpp"

namespace omlog {
namespace {

struct LoopHooks {
    std::function<double(std::size_t)> step_loss;  // loss_and_grad for example i
    std::function<double()> validation_loss;
    std::function<nlohmann::json()> manifest;
};

TrainingLog run_loop(neural::ParameterStore store, std::size_t n, const TrainOptions& opt, const LoopHooks& hooks) {
    const auto& sgd = opt.sgd;
    if (n == 0) throw DataError("no training examples");
    if (sgd.learning_rate < 0.0) throw ConfigError("learning rate must be non-negative");
    if (sgd.epochs == 0) throw ConfigError("epochs must be positive");
    const std::size_t batch = std::max<std::size_t>(sgd.batch_size, 1);
    const std::size_t eval_every = sgd.eval_every == 0 ? sgd.epochs : sgd.eval_every;

    TrainingLog log;
    log.best_loss = std::numeric_limits<double>::infinity();
    neural::ParameterSnapshot best = store.snapshot();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> losses(n);
    neural::Rng rng(opt.seed);

    for (std::size_t epoch = 1; epoch <= sgd.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t b = 0; b < n; b += batch) {
            const std::size_t end = std::min(n, b + batch);
            store.zero_grad();
            for (std::size_t j = b; j < end; ++j) losses[order[j]] = hooks.step_loss(order[j]);
            if (!store.grads_finite()) throw NumericError("non-finite gradient in epoch " + std::to_string(epoch));
            if (sgd.learning_rate > 0.0) {
                neural::sgd_step(store, sgd.learning_rate, 1.0 / static_cast<double>(end - b));
                ++log.update_steps;
            }
        }
        // Summed in example order so the value does not depend on the shuffle.
        const double mean = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(n);
        if (!std::isfinite(mean)) throw NumericError("training loss diverged in epoch " + std::to_string(epoch));
        log.epoch_loss.push_back(mean);
        if (opt.on_epoch) opt.on_epoch(epoch, mean);

        if (epoch % eval_every == 0 || epoch == sgd.epochs) {
            const double v = hooks.validation_loss();
            log.evaluations.push_back({epoch, v});
            if (v < log.best_loss) {
                log.best_loss = v;
                log.best_epoch = epoch;
                best = store.snapshot();
                if (!opt.checkpoint_path.empty()) {
                    auto m = hooks.manifest();
                    m["epoch"] = epoch;
                    m["validation_loss"] = v;
                    neural::write_checkpoint(opt.checkpoint_path, store, m);
                }
            }
        }
    }
    store.restore(best);
    return log;
}

}  // namespace

double mean_loss(const NextEventModel& model, std::span<const NextEventPair> pairs) {
    if (pairs.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& p : pairs) sum += model.loss(p.window, p.target);
    return sum / static_cast<double>(pairs.size());
}

double mean_loss(const NormalityModel& model, std::span<const HeaderFeatureVector> windows) {
    if (windows.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& w : windows) sum += model.window_error(w);
    return sum / static_cast<double>(windows.size());
}

TrainingLog train_initial(NextEventModel& model, std::span<const NextEventPair> pairs, const TrainOptions& options,
                          std::span<const NextEventPair> validation) {
    if (pairs.empty()) throw DataError("no next-event pairs to train on");
    std::size_t max_id = 0;
    for (const auto& p : pairs) {
        max_id = std::max<std::size_t>(max_id, p.target);
        for (auto e : p.window) max_id = std::max<std::size_t>(max_id, e);
    }
    model.grow_classes(std::max(model.vocab_size(), max_id + 1));
    const auto eval_set = validation.empty() ? pairs : validation;
    LoopHooks hooks{
        [&](std::size_t i) { return model.loss_and_grad(pairs[i].window, pairs[i].target); },
        [&] { return mean_loss(model, eval_set); },
        [&] { return model.manifest(); },
    };
    return run_loop(model.parameters(), pairs.size(), options, hooks);
}

TrainingLog train_normality(NormalityModel& model, std::span<const HeaderFeatureVector> windows,
                            const TrainOptions& options, std::span<const HeaderFeatureVector> validation) {
    if (windows.empty()) throw DataError("no header windows to train on");
    const auto eval_set = validation.empty() ? windows : validation;
    LoopHooks hooks{
        [&](std::size_t i) { return model.loss_and_grad(windows[i]); },
        [&] { return mean_loss(model, eval_set); },
        [&] { return model.manifest(); },
    };
    return run_loop(model.parameters(), windows.size(), options, hooks);
}

std::size_t fine_tune(NextEventModel& model, std::span<const NextEventPair> pairs, double learning_rate,
                      std::size_t epochs) {
    if (learning_rate < 0.0) throw ConfigError("learning rate must be non-negative");
    if (learning_rate == 0.0 || pairs.empty()) return 0;
    auto store = model.parameters();
    std::size_t steps = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
        for (const auto& p : pairs) {
            store.zero_grad();
            const double loss = model.loss_and_grad(p.window, p.target);
            if (!std::isfinite(loss) || !store.grads_finite()) throw NumericError("non-finite loss during fine-tuning");
            neural::sgd_step(store, learning_rate);
            ++steps;
        }
    }
    return steps;
}

}  // namespace omlog
