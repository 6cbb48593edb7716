#include "omlog/drift/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omlog/features/features.hpp"

namespace omlog {
namespace {

double padded_sq_distance(const std::vector<double>& u, const std::vector<double>& v) {
    const auto& longer = u.size() >= v.size() ? u : v;
    const auto common = std::min(u.size(), v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < common; ++i) {
        const double diff = u[i] - v[i];
        d += diff * diff;
    }
    for (std::size_t i = common; i < longer.size(); ++i) d += longer[i] * longer[i];
    return d;
}

double kernel_sum(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
                  double sigma) {
    double s = 0.0;
    for (const auto& u : a) {
        for (const auto& v : b) s += std::exp(-padded_sq_distance(u, v) / sigma);
    }
    return s;
}

}  // namespace

DistributionSnapshot DistributionSnapshot::from_samples(std::span<const Sample> samples, std::size_t vocab_size) {
    DistributionSnapshot snap;
    std::vector<bool> seen(vocab_size, false);
    snap.vectors.reserve(samples.size());
    for (const auto& s : samples) {
        auto fv = frequency_vector(s, vocab_size);
        for (auto e : s.events) seen[e] = true;
        snap.vectors.push_back(std::move(fv.values));
    }
    for (std::size_t e = 0; e < seen.size(); ++e) {
        if (seen[e]) snap.event_types.push_back(static_cast<EventId>(e));
    }
    return snap;
}

std::size_t DistributionSnapshot::dimension() const {
    std::size_t d = 0;
    for (const auto& v : vectors) d = std::max(d, v.size());
    return d;
}

double gaussian_kernel(std::span<const double> u, std::span<const double> v, double sigma) {
    if (u.size() != v.size()) throw std::invalid_argument("kernel operands differ in dimension");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("kernel bandwidth must be positive");
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = u[i] - v[i];
        d += diff * diff;
    }
    return std::exp(-d / sigma);
}

double mmd_value(const DistributionSnapshot& p, const DistributionSnapshot& q, double sigma) {
    if (p.empty() || q.empty()) throw std::invalid_argument("MMD needs non-empty snapshots");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("kernel bandwidth must be positive");
    const double np = static_cast<double>(p.vectors.size());
    const double nq = static_cast<double>(q.vectors.size());
    const double pp = kernel_sum(p.vectors, p.vectors, sigma) / (np * np);
    const double pq = 2.0 * kernel_sum(p.vectors, q.vectors, sigma) / (np * nq);
    const double qq = kernel_sum(q.vectors, q.vectors, sigma) / (nq * nq);
    return std::max(0.0, pp - pq + qq);
}

}  // namespace omlog
