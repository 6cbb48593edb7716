#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "omlog/app/config.hpp"
#include "omlog/corpus/log_record.hpp"

namespace omlog::app {

// One stationary stretch of the stream: a Markov chain over an event subset.
struct Regime {
    std::vector<EventId> alphabet;
    std::vector<std::vector<double>> transitions;  // rows sum to 1
    std::size_t samples = 0;
};

struct SyntheticSpec {
    std::vector<Regime> regimes;
    std::vector<EventId> alien_events;  // never produced by any regime
    std::size_t sample_length = 20;
    double anomaly_rate = 0.1;
    double alien_fraction = 0.5;  // remaining anomalies use a forbidden transition
    double header_anomaly_prob = 0.85;
    double warn_rate = 0.05;
    // Fraction of blocks that are exact copies of the block before them.
    double repeat_fraction = 0.0;
    std::size_t repeat_block = 100;
    std::size_t component_pool = 4;
    std::uint64_t seed = 0;
};

// Throws ConfigError for empty regimes, non-square or non-stochastic matrices.
void validate(const SyntheticSpec& spec);

// Regimes with consecutive alphabets (each sharing `shared_events` with the
// previous one). Each chain follows a random Hamiltonian cycle with
// probability 0.75 and one other random successor with probability 0.25.
SyntheticSpec make_synthetic_spec(const SyntheticSettings& settings, std::uint64_t seed);

struct SyntheticStream {
    std::vector<Sample> samples;
    std::vector<std::size_t> shift_points;  // first sample of every regime after the first
    std::vector<std::size_t> regime_of;     // per sample
    std::vector<bool> repeat_block;         // per block of repeat_block samples
    std::size_t block_size = 0;
    std::size_t vocab_size = 0;

    // Batch indices (of size b, counted from sample `offset`) holding a shift point.
    std::vector<std::size_t> shift_batches(std::size_t b, std::size_t offset = 0) const;
};

// Event ids in the output are renumbered by first appearance, so the first
// regime's events come first.
SyntheticStream synthesize(const SyntheticSpec& spec);

}  // namespace omlog::app
