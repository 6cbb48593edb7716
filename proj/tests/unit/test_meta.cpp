#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "omlog/detectors/training.hpp"
#include "omlog/meta/episode.hpp"

using namespace omlog;

namespace {

Sample sample_at(std::size_t origin, std::vector<EventId> ev = {0, 1, 2, 3, 0}) {
    Sample s;
    s.events = std::move(ev);
    for (std::size_t i = 0; i < s.events.size(); ++i) s.headers.push_back({static_cast<std::int64_t>(i), 0, 0});
    s.label = Label::Normal;
    s.origin.window_index = origin;
    return s;
}

std::vector<Sample> batch_from(std::size_t first, std::size_t n) {
    std::vector<Sample> b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(sample_at(first + i));
    return b;
}

NextEventConfig model_config() {
    NextEventConfig cfg;
    cfg.vocab_size = 5;
    cfg.embed_dim = 4;
    cfg.hidden = 8;
    cfg.window = 3;
    cfg.top_k = 1;
    cfg.seed = 2;
    return cfg;
}

EpisodeConfig episode(std::size_t T, std::size_t n, double lr = 0.05, std::size_t epochs = 3) {
    EpisodeConfig c;
    c.tasks_per_batch = T;
    c.support_size = n;
    c.inner_epochs = epochs;
    c.inner_lr = lr;
    return c;
}

}  // namespace

TEST(MetaTasks, EvenSlices) {
    const auto batch = batch_from(0, 10);
    const auto tasks = build_meta_tasks(batch, {}, episode(2, 5));
    ASSERT_EQ(tasks.size(), 2u);
    EXPECT_EQ(tasks[0].query_begin, 0u);
    EXPECT_EQ(tasks[0].query_end, 5u);
    EXPECT_EQ(tasks[1].query_begin, 5u);
    EXPECT_EQ(tasks[1].query_end, 10u);
    EXPECT_TRUE(tasks[0].support.empty());
}

TEST(MetaTasks, SlicesPartitionTheBatch) {
    for (std::size_t n : {1u, 7u, 10u, 23u, 100u}) {
        for (std::size_t T : {1u, 3u, 10u, 40u}) {
            const auto batch = batch_from(0, n);
            const auto tasks = build_meta_tasks(batch, {}, episode(T, 5));
            ASSERT_EQ(tasks.size(), std::min(T, n));
            std::size_t at = 0, lo = n, hi = 0;
            for (const auto& t : tasks) {
                EXPECT_EQ(t.query_begin, at);
                at = t.query_end;
                lo = std::min(lo, t.query_size());
                hi = std::max(hi, t.query_size());
            }
            EXPECT_EQ(at, n);
            EXPECT_LE(hi - lo, 1u);
        }
    }
}

TEST(MetaTasks, NearestSupportsWithTies) {
    std::vector<Sample> normals = {sample_at(1), sample_at(4), sample_at(9)};
    // Query origins {7,8,9}: median 8 -> distances 7, 4, 1.
    const auto batch = batch_from(7, 3);
    const auto tasks = build_meta_tasks(batch, normals, episode(1, 2));
    ASSERT_EQ(tasks.size(), 1u);
    EXPECT_DOUBLE_EQ(median_origin(batch), 8.0);
    ASSERT_EQ(tasks[0].support.size(), 2u);
    EXPECT_EQ(normals[tasks[0].support[0]].origin.window_index, 9u);
    EXPECT_EQ(normals[tasks[0].support[1]].origin.window_index, 4u);

    // Equal distance: the earlier normal wins.
    std::vector<Sample> tied = {sample_at(10), sample_at(6)};
    const auto t2 = build_meta_tasks(batch, tied, episode(1, 1));
    EXPECT_EQ(t2[0].support, std::vector<std::size_t>{0});
}

TEST(MetaTasks, SupportSizeCappedByAvailableNormals) {
    std::vector<Sample> normals = {sample_at(3), sample_at(5)};
    const auto tasks = build_meta_tasks(batch_from(0, 6), normals, episode(3, 20));
    for (const auto& t : tasks) EXPECT_EQ(t.support.size(), 2u);
}

TEST(MetaTasks, MedianOfEvenCount) {
    EXPECT_DOUBLE_EQ(median_origin(batch_from(4, 4)), 5.5);
}

TEST(MetaTasks, InvalidConfig) {
    EXPECT_ANY_THROW(validate(episode(0, 5)));
    EXPECT_ANY_THROW(validate(episode(2, 5, -1.0)));
    EXPECT_NO_THROW(validate(episode(2, 0)));
}

TEST(Episode, EmptySupportLeavesModelBitExact) {
    NextEventModel m(model_config());
    const auto before = m.parameters().snapshot();
    const auto batch = batch_from(0, 4);
    MetaTask task{0, 0, 4, {}};
    const auto r = run_episode(m, task, batch, {}, episode(1, 5));
    EXPECT_EQ(m.parameters().snapshot().values, before.values);
    EXPECT_EQ(r.update_steps, 0u);
    EXPECT_EQ(r.verdicts.size(), 4u);
    EXPECT_EQ(r.query_windows, 8u);
}

TEST(Episode, ZeroInnerRateMatchesOfflineScoring) {
    NextEventModel m(model_config());
    const NextEventModel offline = m;
    std::vector<Sample> batch;
    std::mt19937_64 rng(3);
    for (std::size_t i = 0; i < 12; ++i) {
        std::vector<EventId> ev(6);
        for (auto& e : ev) e = static_cast<EventId>(rng() % 5);
        batch.push_back(sample_at(i, ev));
    }
    const auto tasks = build_meta_tasks(batch, batch, episode(3, 4, 0.0));
    for (const auto& t : tasks) {
        const auto r = run_episode(m, t, batch, batch, episode(3, 4, 0.0));
        for (std::size_t q = 0; q < r.verdicts.size(); ++q) {
            EXPECT_EQ(r.verdicts[q], offline.score_sample(batch[t.query_begin + q]));
        }
    }
}

TEST(Episode, SupportLeakReducesQueryLoss) {
    NextEventModel m(model_config());
    const auto batch = batch_from(0, 4);
    MetaTask task{0, 0, 4, {0, 1, 2, 3}};
    NextEventModel untouched = m;
    double before = 0;
    for (const auto& s : batch) before += *untouched.sample_loss(s);
    before /= 4.0;
    const auto r = run_episode(m, task, batch, batch, episode(1, 4, 0.05, 5));
    EXPECT_GT(r.update_steps, 0u);
    EXPECT_LE(r.loss, before);
    EXPECT_FALSE(r.aborted);
}

TEST(Episode, DivergenceRestoresSnapshot) {
    NextEventModel m(model_config());
    const auto before = m.parameters().snapshot();
    const auto batch = batch_from(0, 4);
    MetaTask task{0, 0, 4, {0, 1, 2, 3}};
    const auto r = run_episode(m, task, batch, batch, episode(1, 4, 1e305, 5));
    EXPECT_TRUE(r.aborted);
    EXPECT_EQ(m.parameters().snapshot().values, before.values);
    EXPECT_EQ(r.verdicts.size(), 4u);
}

TEST(DetectBatch, UpdatesPersistAndVerdictsAlign) {
    NextEventModel m(model_config());
    NormalityConfig nc;
    nc.threshold = 1e9;  // everything passes the filter
    NormalityModel normality(nc);
    const auto batch = batch_from(0, 9);
    const auto before = m.parameters().snapshot();
    const auto r = detect_batch(m, batch, normality, episode(3, 2));
    EXPECT_EQ(r.verdicts.size(), 9u);
    EXPECT_EQ(r.tasks.size(), 3u);
    EXPECT_EQ(r.filtered_normals, 9u);
    EXPECT_GT(r.update_steps, 0u);
    EXPECT_NE(m.parameters().snapshot().values, before.values);
    double sum = 0;
    for (const auto& t : r.tasks) sum += t.loss;
    EXPECT_NEAR(r.meta_loss, sum / 3.0, 1e-15);
}

TEST(DetectBatch, NoNormalsMeansNoUpdates) {
    NextEventModel m(model_config());
    NormalityConfig nc;
    nc.threshold = 1e-300;  // nothing passes
    NormalityModel normality(nc);
    const auto before = m.parameters().snapshot();
    const auto r = detect_batch(m, batch_from(0, 6), normality, episode(2, 3));
    EXPECT_EQ(r.filtered_normals, 0u);
    EXPECT_EQ(r.update_steps, 0u);
    EXPECT_EQ(r.tasks.size(), 2u);
    EXPECT_EQ(m.parameters().snapshot().values, before.values);
}

TEST(DetectBatch, GrowsForNewEvents) {
    NextEventModel m(model_config());
    NormalityModel normality(NormalityConfig{});
    std::vector<Sample> batch = {sample_at(0, {0, 1, 2, 7, 1})};
    detect_batch(m, batch, normality, episode(1, 1));
    EXPECT_EQ(m.vocab_size(), 8u);
    EXPECT_EQ(required_vocab(batch), 8u);
    EXPECT_EQ(required_vocab(std::span<const Sample>{}), 0u);
}

TEST(DetectBatch, SingleTaskEqualsFineTuneThenTest) {
    NextEventModel a(model_config());
    NextEventModel b = a;
    NormalityConfig nc;
    nc.threshold = 1e9;
    NormalityModel normality(nc);
    const auto batch = batch_from(0, 5);
    const auto r = detect_batch(a, batch, normality, episode(1, 5, 0.05, 2));
    // Same thing by hand: every sample is support, ordered nearest to median 2.
    std::vector<std::size_t> order = {2, 1, 3, 0, 4};
    std::vector<NextEventPair> pairs;
    for (auto i : order) append_next_event_pairs(std::span<const Sample>(&batch[i], 1), 3, pairs);
    fine_tune(b, pairs, 0.05, 2);
    for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(r.verdicts[i], b.score_sample(batch[i]));
    EXPECT_EQ(a.parameters().snapshot().values, b.parameters().snapshot().values);
}
