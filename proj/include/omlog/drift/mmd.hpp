#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

// The samples S_1..S_p of one distribution, as event-frequency vectors.
// Vectors may have different lengths (vocabulary growth); shorter ones are
// zero-padded when compared.
struct DistributionSnapshot {
    std::vector<std::vector<double>> vectors;
    std::vector<EventId> event_types;  // sorted union of histogram support

    static DistributionSnapshot from_samples(std::span<const Sample> samples, std::size_t vocab_size);

    std::size_t dimension() const;
    bool empty() const { return vectors.empty(); }
};

struct MmdConfig {
    double sigma = 1.0;    // k(u, v) = exp(-||u - v||^2 / sigma)
    double epsilon = 0.0;  // route Online when MMD > epsilon
};

// Both spans must have the same length; sigma > 0.
double gaussian_kernel(std::span<const double> u, std::span<const double> v, double sigma);

// Biased kernel estimator of the squared MMD, self-pairs included:
//   1/p^2 sum k(P_i, P_j) - 2/(pq) sum k(P_i, Q_j) + 1/q^2 sum k(Q_i, Q_j)
// Tiny negative values from rounding are clamped to zero.
double mmd_value(const DistributionSnapshot& p, const DistributionSnapshot& q, double sigma);

}  // namespace omlog
