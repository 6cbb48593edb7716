#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

struct NextEventPair {
    std::vector<EventId> window;
    EventId target = 0;

    friend bool operator==(const NextEventPair&, const NextEventPair&) = default;
};

// Slides an h-event window over the sample by one: len - h pairs (none when len <= h).
std::vector<NextEventPair> next_event_pairs(const Sample& sample, std::size_t h);

// Appends the pairs of every sample; returns how many samples were too short.
std::size_t append_next_event_pairs(std::span<const Sample> samples, std::size_t h,
                                    std::vector<NextEventPair>& out);

struct HeaderFeatureConfig {
    std::size_t component_cap = 16;
    std::size_t level_cap = 8;
    double dt_clip_seconds = 3600.0;

    // [log(1 + dt), components..., component overflow, levels..., level overflow]
    std::size_t dimension() const { return 1 + component_cap + 1 + level_cap + 1; }
};

using HeaderFeatureVector = std::vector<double>;

// One vector per record. The first record has dt = 0; negative gaps (clock
// regressions) are clipped to 0, and ids beyond the caps share the overflow slot.
std::vector<HeaderFeatureVector> header_features(const Sample& sample, const HeaderFeatureConfig& cfg);

// Header features mean-pooled over consecutive runs of `subwindow` records
// (the last run may be shorter).
std::vector<HeaderFeatureVector> pooled_header_windows(const Sample& sample, const HeaderFeatureConfig& cfg,
                                                       std::size_t subwindow);

struct FrequencyVector {
    std::vector<double> values;  // L1-normalised event histogram
    bool degenerate = false;     // empty sample, all zeros
};

FrequencyVector frequency_vector(const Sample& sample, std::size_t vocab_size);

// Precomputed per-event vectors, rows of "event_id dim v1 ... vdim".
std::map<EventId, std::vector<double>> read_event_embeddings(const std::filesystem::path& path);

}  // namespace omlog
