#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "omlog/drift/mmd.hpp"

namespace omlog {

// Set of event ids the detector has already seen.
class KnownEvents {
public:
    KnownEvents() = default;
    // All ids below vocab_size.
    explicit KnownEvents(std::size_t vocab_size) : known_(vocab_size, true) {}

    void add(EventId id);
    void add(std::span<const Sample> samples);
    bool contains(EventId id) const { return id < known_.size() && known_[id]; }
    std::size_t count() const;

private:
    std::vector<bool> known_;
};

enum class Route { Offline, Online };

std::string_view to_string(Route route);

struct RouteDecision {
    Route route = Route::Offline;
    double mmd = 0.0;
    bool new_events = false;
};

struct CalibrationOptions {
    std::size_t sigma_subsample = 512;
    double epsilon_divisor = 10.0;
    std::uint64_t seed = 0;
};

// Median of pairwise squared distances over a seeded subsample of the
// vectors; 1.0 when the median is zero.
double median_heuristic_sigma(std::span<const DistributionSnapshot> batches, std::size_t subsample,
                              std::uint64_t seed);

// sigma by the median heuristic; epsilon = mean MMD over consecutive training
// batch pairs divided by epsilon_divisor. Needs at least two batches.
MmdConfig calibrate(std::span<const DistributionSnapshot> train_batches, const CalibrationOptions& options = {});

// Online iff the current batch has an event outside `known` or MMD(prev, cur) > epsilon;
// epsilon <= 0 routes every batch online.
RouteDecision decide(const DistributionSnapshot& prev, const DistributionSnapshot& cur, const KnownEvents& known,
                     const MmdConfig& cfg);

}  // namespace omlog
