#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "omlog/drift/mmd.hpp"
#include "omlog/drift/shift_detector.hpp"

using namespace omlog;

namespace {

using Vecs = std::vector<std::vector<double>>;

DistributionSnapshot snap(Vecs v) {
    DistributionSnapshot s;
    s.vectors = std::move(v);
    return s;
}

// Direct triple sum, padding each pair to the longer length.
double naive_mmd(const Vecs& p, const Vecs& q, double sigma) {
    auto k = [sigma](const std::vector<double>& a, const std::vector<double>& b) {
        const std::size_t n = std::max(a.size(), b.size());
        double d = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = i < a.size() ? a[i] : 0.0;
            const double y = i < b.size() ? b[i] : 0.0;
            d += (x - y) * (x - y);
        }
        return std::exp(-d / sigma);
    };
    double pp = 0, pq = 0, qq = 0;
    for (const auto& a : p)
        for (const auto& b : p) pp += k(a, b);
    for (const auto& a : p)
        for (const auto& b : q) pq += k(a, b);
    for (const auto& a : q)
        for (const auto& b : q) qq += k(a, b);
    const double np = static_cast<double>(p.size()), nq = static_cast<double>(q.size());
    return std::max(0.0, pp / (np * np) - 2.0 * pq / (np * nq) + qq / (nq * nq));
}

Vecs random_vecs(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vecs v(n, std::vector<double>(dim));
    for (auto& x : v)
        for (auto& y : x) y = u(rng);
    return v;
}

Sample sample_of(std::vector<EventId> ev) {
    Sample s;
    s.events = std::move(ev);
    s.headers.resize(s.events.size());
    return s;
}

}  // namespace

TEST(Kernel, Examples) {
    const std::vector<double> a{0.3, 0.7}, z{0.0}, o{1.0};
    EXPECT_DOUBLE_EQ(gaussian_kernel(a, a, 1.0), 1.0);
    EXPECT_NEAR(gaussian_kernel(z, o, 1.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(gaussian_kernel(z, o, 1.0), 0.367879, 1e-6);
}

TEST(Kernel, Symmetric) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto v = random_vecs(rng, 2, 6);
        EXPECT_EQ(gaussian_kernel(v[0], v[1], 0.7), gaussian_kernel(v[1], v[0], 0.7));
    }
}

TEST(Kernel, BadInputThrows) {
    const std::vector<double> a{1.0}, b{1.0, 2.0};
    EXPECT_ANY_THROW(gaussian_kernel(a, b, 1.0));
    EXPECT_ANY_THROW(gaussian_kernel(a, a, 0.0));
}

TEST(Mmd, SpotValues) {
    EXPECT_NEAR(mmd_value(snap({{0.0}}), snap({{1.0}}), 1.0), 2.0 - 2.0 * std::exp(-1.0), 1e-12);
    const Vecs p{{0.0}, {2.0}}, q{{1.0}, {1.0}};
    const double oracle = naive_mmd(p, q, 1.0);
    EXPECT_NEAR(mmd_value(snap(p), snap(q), 1.0), oracle, 1e-12);
    EXPECT_NEAR(oracle, 0.773399, 1e-6);
}

TEST(Mmd, SameMultisetIsZero) {
    std::mt19937_64 rng(4);
    const auto p = random_vecs(rng, 20, 5);
    auto q = p;
    std::reverse(q.begin(), q.end());
    EXPECT_LE(mmd_value(snap(p), snap(q), 1.0), 1e-12);
}

TEST(Mmd, MatchesNaiveOracleAndIsSymmetric) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_vecs(rng, 1 + rng() % 12, 1 + rng() % 6);
        const auto q = random_vecs(rng, 1 + rng() % 12, p[0].size());
        const double sigma = 0.2 + static_cast<double>(rng() % 100) / 50.0;
        const double m = mmd_value(snap(p), snap(q), sigma);
        EXPECT_NEAR(m, naive_mmd(p, q, sigma), 1e-10);
        EXPECT_NEAR(m, mmd_value(snap(q), snap(p), sigma), 1e-12);
        EXPECT_GE(m, 0.0);
    }
}

TEST(Mmd, ZeroPadsShorterVectors) {
    const Vecs p{{0.5, 0.5}}, q{{1.0, 0.0, 0.0}};
    EXPECT_NEAR(mmd_value(snap(p), snap(q), 1.0), naive_mmd(p, q, 1.0), 1e-14);
}

TEST(Mmd, EmptySnapshotThrows) {
    EXPECT_ANY_THROW(mmd_value(snap({}), snap({{1.0}}), 1.0));
}

TEST(Snapshot, FromSamples) {
    std::vector<Sample> ss = {sample_of({0, 0, 2}), sample_of({2})};
    const auto s = DistributionSnapshot::from_samples(ss, 4);
    ASSERT_EQ(s.vectors.size(), 2u);
    EXPECT_EQ(s.vectors[1], (std::vector<double>{0, 0, 1, 0}));
    EXPECT_EQ(s.event_types, (std::vector<EventId>{0, 2}));
}

TEST(Calibrate, EpsilonIsTenthOfMeanConsecutiveMmd) {
    std::mt19937_64 rng(21);
    std::vector<DistributionSnapshot> batches;
    for (int b = 0; b < 4; ++b) batches.push_back(snap(random_vecs(rng, 8, 4)));
    const auto cfg = calibrate(batches, {});
    double sum = 0;
    for (std::size_t i = 1; i < batches.size(); ++i) {
        sum += naive_mmd(batches[i - 1].vectors, batches[i].vectors, cfg.sigma);
    }
    EXPECT_NEAR(cfg.epsilon, sum / 3.0 / 10.0, 1e-12);
    EXPECT_GT(cfg.sigma, 0.0);
}

TEST(Calibrate, StatedArithmetic) {
    // Two consecutive-pair MMDs of 0.02 and 0.04.
    const double mean = (0.02 + 0.04) / 2.0;
    EXPECT_NEAR(mean / 10.0, 0.003, 1e-15);
}

TEST(Calibrate, IdenticalBatchesGiveZeroEpsilon) {
    const Vecs v{{0.2, 0.8}, {1.0, 0.0}};
    std::vector<DistributionSnapshot> batches(3, snap(v));
    const auto cfg = calibrate(batches, {});
    EXPECT_EQ(cfg.epsilon, 0.0);
    KnownEvents known(2);
    const auto d = decide(batches[0], snap({{0.0, 1.0}}), known, cfg);
    EXPECT_GT(d.mmd, 0.0);
    EXPECT_EQ(d.route, Route::Online);
}

TEST(Calibrate, ConstantVectorsFallBackToUnitSigma) {
    std::vector<DistributionSnapshot> batches(3, snap({{1.0, 0.0}, {1.0, 0.0}}));
    EXPECT_EQ(median_heuristic_sigma(batches, 512, 0), 1.0);
    EXPECT_EQ(calibrate(batches, {}).sigma, 1.0);
}

TEST(Calibrate, NeedsTwoBatches) {
    std::vector<DistributionSnapshot> one(1, snap({{1.0}}));
    EXPECT_ANY_THROW(calibrate(one, {}));
}

TEST(Calibrate, MedianHeuristicOnSmallSet) {
    // Pairwise squared distances of {0},{1},{3}: 1, 9, 4 -> median 4.
    std::vector<DistributionSnapshot> batches = {snap({{0.0}, {1.0}}), snap({{3.0}})};
    EXPECT_DOUBLE_EQ(median_heuristic_sigma(batches, 512, 0), 4.0);
}

TEST(Decide, NewEventForcesOnline) {
    const auto prev = snap({{1.0, 0.0}});
    auto cur = snap({{1.0, 0.0, 0.0}});
    cur.event_types = {0, 2};
    KnownEvents known(2);
    const auto d = decide(prev, cur, known, MmdConfig{1.0, 1e9});
    EXPECT_TRUE(d.new_events);
    EXPECT_EQ(d.route, Route::Online);
}

TEST(Decide, SameBatchIsOffline) {
    auto prev = snap({{0.5, 0.5}, {1.0, 0.0}});
    prev.event_types = {0, 1};
    KnownEvents known(2);
    const auto d = decide(prev, prev, known, MmdConfig{1.0, 0.01});
    EXPECT_FALSE(d.new_events);
    EXPECT_EQ(d.mmd, 0.0);
    EXPECT_EQ(d.route, Route::Offline);
}

TEST(Decide, ThresholdRule) {
    const auto p = snap({{0.0}}), q = snap({{0.5}});
    const double m = mmd_value(p, q, 1.0);
    KnownEvents known(1);
    EXPECT_EQ(decide(p, q, known, MmdConfig{1.0, m / 1.5}).route, Route::Online);
    EXPECT_EQ(decide(p, q, known, MmdConfig{1.0, m}).route, Route::Offline);
}

TEST(Decide, RoutingMonotoneInEpsilon) {
    std::mt19937_64 rng(17);
    std::vector<DistributionSnapshot> stream;
    for (int i = 0; i < 30; ++i) stream.push_back(snap(random_vecs(rng, 5, 3)));
    KnownEvents known(3);
    std::size_t last = stream.size();
    for (double eps : {1e-6, 1e-3, 1e-2, 0.05, 0.1, 0.5, 2.0}) {
        std::size_t online = 0;
        for (std::size_t i = 1; i < stream.size(); ++i) {
            online += decide(stream[i - 1], stream[i], known, MmdConfig{1.0, eps}).route == Route::Online;
        }
        EXPECT_LE(online, last);
        last = online;
    }
}

TEST(KnownEventsSet, AddAndContains) {
    KnownEvents k(3);
    EXPECT_TRUE(k.contains(2));
    EXPECT_FALSE(k.contains(5));
    k.add(5);
    EXPECT_TRUE(k.contains(5));
    EXPECT_FALSE(k.contains(4));
    EXPECT_EQ(k.count(), 4u);
}
