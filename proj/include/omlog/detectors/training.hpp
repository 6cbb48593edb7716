#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"
#include "omlog/features/features.hpp"
#include "omlog/neural/sgd.hpp"

namespace omlog {

struct TrainOptions {
    neural::SgdConfig sgd;
    std::uint64_t seed = 0;  // example shuffling
    // Best-so-far weights are written here at evaluation points (empty: none).
    std::filesystem::path checkpoint_path;
    std::function<void(std::size_t epoch, double train_loss)> on_epoch;
};

struct TrainingLog {
    std::vector<double> epoch_loss;  // mean objective over each epoch, pre-update values
    struct Evaluation {
        std::size_t epoch = 0;
        double loss = 0.0;
    };
    std::vector<Evaluation> evaluations;
    std::size_t best_epoch = 0;
    double best_loss = 0.0;
    std::size_t update_steps = 0;
};

// Standard training on normal next-event pairs. Every eval_every epochs (and
// after the last) the validation loss is computed, on `validation` when given
// and on the training pairs otherwise; the best weights are restored at the end.
TrainingLog train_initial(NextEventModel& model, std::span<const NextEventPair> pairs, const TrainOptions& options,
                          std::span<const NextEventPair> validation = {});

TrainingLog train_normality(NormalityModel& model, std::span<const HeaderFeatureVector> windows,
                            const TrainOptions& options, std::span<const HeaderFeatureVector> validation = {});

// Plain SGD passes in the given order, no evaluation; returns the number of
// parameter updates applied (0 when lr is 0). Non-finite values throw NumericError.
std::size_t fine_tune(NextEventModel& model, std::span<const NextEventPair> pairs, double learning_rate,
                      std::size_t epochs);

double mean_loss(const NextEventModel& model, std::span<const NextEventPair> pairs);
double mean_loss(const NormalityModel& model, std::span<const HeaderFeatureVector> windows);

}  // namespace omlog
