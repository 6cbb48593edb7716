#include "omlog/drift/shift_detector.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace omlog {

void KnownEvents::add(EventId id) {
    if (id >= known_.size()) known_.resize(static_cast<std::size_t>(id) + 1, false);
    known_[id] = true;
}

void KnownEvents::add(std::span<const Sample> samples) {
    for (const auto& s : samples) {
        for (auto e : s.events) add(e);
    }
}

std::size_t KnownEvents::count() const { return static_cast<std::size_t>(std::count(known_.begin(), known_.end(), true)); }

std::string_view to_string(Route route) { return route == Route::Online ? "online" : "offline"; }

double median_heuristic_sigma(std::span<const DistributionSnapshot> batches, std::size_t subsample,
                              std::uint64_t seed) {
    std::vector<const std::vector<double>*> pool;
    for (const auto& b : batches) {
        for (const auto& v : b.vectors) pool.push_back(&v);
    }
    if (pool.size() > subsample) {
        std::mt19937_64 rng(seed);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(subsample);
    }
    std::vector<double> d2;
    d2.reserve(pool.size() * (pool.size() - (pool.empty() ? 0 : 1)) / 2);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const auto& u = *pool[i];
            const auto& v = *pool[j];
            double d = 0.0;
            for (std::size_t k = 0; k < std::max(u.size(), v.size()); ++k) {
                const double a = k < u.size() ? u[k] : 0.0;
                const double b = k < v.size() ? v[k] : 0.0;
                d += (a - b) * (a - b);
            }
            d2.push_back(d);
        }
    }
    if (d2.empty()) return 1.0;
    const auto mid = d2.size() / 2;
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
    double median = d2[mid];
    if (d2.size() % 2 == 0) {
        const double lower = *std::max_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    return median > 0.0 ? median : 1.0;
}

MmdConfig calibrate(std::span<const DistributionSnapshot> train_batches, const CalibrationOptions& options) {
    if (train_batches.size() < 2) throw std::invalid_argument("calibration needs at least two training batches");
    if (!(options.epsilon_divisor > 0.0)) throw std::invalid_argument("epsilon divisor must be positive");
    MmdConfig cfg;
    cfg.sigma = median_heuristic_sigma(train_batches, options.sigma_subsample, options.seed);
    double total = 0.0;
    for (std::size_t i = 1; i < train_batches.size(); ++i) {
        total += mmd_value(train_batches[i - 1], train_batches[i], cfg.sigma);
    }
    const double mean = total / static_cast<double>(train_batches.size() - 1);
    cfg.epsilon = mean / options.epsilon_divisor;
    return cfg;
}

RouteDecision decide(const DistributionSnapshot& prev, const DistributionSnapshot& cur, const KnownEvents& known,
                     const MmdConfig& cfg) {
    RouteDecision d;
    d.new_events = std::any_of(cur.event_types.begin(), cur.event_types.end(),
                               [&](EventId e) { return !known.contains(e); });
    d.mmd = mmd_value(prev, cur, cfg.sigma);
    // A zero threshold tolerates no stability at all, so even identical batches go online.
    const bool shifted = d.mmd > cfg.epsilon || cfg.epsilon <= 0.0;
    d.route = (d.new_events || shifted) ? Route::Online : Route::Offline;
    return d;
}

}  // namespace omlog
