#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "omlog/analysis/dtw.hpp"
#include "omlog/corpus/log_record.hpp"

namespace omlog {

// Consecutive batches of `batch_size` samples; the last may be short.
std::vector<std::span<const Sample>> make_batches(std::span<const Sample> stream, std::size_t batch_size);

struct SimilarityConfig {
    std::size_t history = 10;     // previous batches used for the external distance
    std::size_t pair_cap = 2000;  // max DTW pairs per value; more are subsampled
    std::uint64_t seed = 0;
    DtwCost cost = DtwCost::Categorical;
};

// Values are DTW distances: lower means more similar.
struct BatchSimilarity {
    std::size_t index = 0;
    std::optional<double> internal;  // empty when the batch has < 2 samples
    std::optional<double> external;  // empty for the first batch
    std::size_t internal_pairs = 0;
    std::size_t external_pairs = 0;
};

struct SimilarityReport {
    std::vector<BatchSimilarity> batches;
    double mean_internal = 0.0;  // over batches with a value
    double mean_external = 0.0;
};

SimilarityReport similarity_report(std::span<const std::span<const Sample>> batches, const SimilarityConfig& cfg);

struct ShiftCensus {
    std::vector<double> mmd;  // MMD(batch i, batch i+1)
    double sigma = 1.0;
    double threshold = 0.0;
    std::size_t batches = 0;
    std::size_t below_threshold = 0;  // pairs with mmd <= threshold
    std::size_t identical = 0;        // pairs whose batches hold the same event sequences
    // below_threshold / batches
    double stable_fraction() const { return batches ? static_cast<double>(below_threshold) / batches : 0.0; }
};

// MMD over event-frequency snapshots; sigma <= 0 selects the median heuristic.
ShiftCensus shift_census(std::span<const std::span<const Sample>> batches, std::size_t vocab_size, double threshold,
                         double sigma = 0.0, std::uint64_t seed = 0);

void write_similarity_csv(const std::filesystem::path& path, const SimilarityReport& report);
void write_census_csv(const std::filesystem::path& path, const ShiftCensus& census);
// One row per sample: index, label, L1-normalised frequency vector.
void write_frequency_csv(const std::filesystem::path& path, std::span<const Sample> samples, std::size_t vocab_size);

}  // namespace omlog
