// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omlog/analysis/dtw.hpp"
#include "omlog/analysis/similarity.hpp"
#include "omlog/app/config.hpp"
#include "omlog/app/datasets.hpp"
#include "omlog/app/synthetic.hpp"
#include "omlog/app/workflow.hpp"
#include "omlog/corpus/grouping.hpp"
#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"
#include "omlog/drift/mmd.hpp"
#include "omlog/meta/episode.hpp"
#include "omlog/neural/gradient_check.hpp"
#include "omlog/neural/layers.hpp"
#include "omlog/pipeline/metrics.hpp"
#include "omlog/pipeline/stream.hpp"

using namespace omlog;

namespace {

// Pinned tolerances and budgets.
constexpr double kMmdOracleTol = 1e-10;
constexpr double kMmdSelfTol = 1e-12;
constexpr double kMmdClosedFormTol = 1e-12;
constexpr double kMmdTwoPointTol = 1e-6;
constexpr double kTwoPointValue = 0.773399;
constexpr double kLayerGradTol = 1e-4;
constexpr double kModelGradTol = 1e-3;
constexpr double kDtwTol = 1e-12;
constexpr double kStepRatioMax = 0.40;
constexpr double kF1GapMax = 0.02;
constexpr double kAblationMargin = 0.15;
constexpr double kCensusTarget = 0.621;
constexpr double kCensusRelTol = 0.10;
constexpr double kBudgetMmd = 5.0;
constexpr double kBudgetGrad = 60.0;
constexpr double kBudgetRouting = 600.0;
constexpr double kBudgetAblation = 1200.0;

struct Outcome {
    bool pass = false;
    std::string detail;
    bool skipped = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Desk-scale synthetic settings, same values as configs/synthetic.ini.
const char* kSyntheticIni = R"(
[dataset]
format = synthetic
train_ratio = 0.33333333333333331
[model]
embed_dim = 8
hidden = 32
h = 4
top_k = 2
[normality]
learning_rate = 0.05
epochs = 20
[train]
learning_rate = 0.05
epochs = 20
eval_every = 5
validation_fraction = 0.1
[meta]
tasks_per_batch = 10
support_size = 20
inner_epochs = 5
inner_lr = 0.05
[online]
epochs = 1
learning_rate = 0.05
[stream]
batch_size = 100
mode = omlog
[synthetic]
regimes = 3
alphabet = 10
samples_per_regime = 650
sample_length = 20
anomaly_rate = 0.1
[run]
seed = 1
)";

// Much smaller variant for the structural checks.
const char* kSmallIni = R"(
[dataset]
format = synthetic
train_ratio = 0.5
[model]
embed_dim = 4
hidden = 8
h = 3
top_k = 2
[normality]
hidden = 6
code = 3
learning_rate = 0.05
epochs = 5
[train]
learning_rate = 0.05
epochs = 5
eval_every = 5
[meta]
tasks_per_batch = 3
support_size = 5
inner_epochs = 2
inner_lr = 0.05
[online]
learning_rate = 0.05
[stream]
batch_size = 25
[synthetic]
regimes = 1
alphabet = 6
samples_per_regime = 200
sample_length = 10
anomaly_rate = 0.1
alien_fraction = 0
[run]
seed = 5
)";

// ---- independent oracles -------------------------------------------------

double oracle_kernel(const std::vector<double>& a, const std::vector<double>& b, double sigma) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-d / sigma);
}

double oracle_mmd(const std::vector<std::vector<double>>& p, const std::vector<std::vector<double>>& q, double sigma) {
    double xx = 0, xy = 0, yy = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) xx += oracle_kernel(p[i], p[j], sigma);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) xy += oracle_kernel(p[i], q[j], sigma);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) yy += oracle_kernel(q[i], q[j], sigma);
    const double m = static_cast<double>(p.size()), n = static_cast<double>(q.size());
    return std::max(0.0, xx / (m * m) - 2.0 * xy / (m * n) + yy / (n * n));
}

template <typename T, typename Cost>
double oracle_dtw(const std::vector<T>& x, const std::vector<T>& y, Cost cost) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> D(x.size() + 1, std::vector<double>(y.size() + 1, inf));
    D[0][0] = 0;
    for (std::size_t i = 1; i <= x.size(); ++i)
        for (std::size_t j = 1; j <= y.size(); ++j)
            D[i][j] = cost(x[i - 1], y[j - 1]) + std::min({D[i - 1][j], D[i][j - 1], D[i - 1][j - 1]});
    return D[x.size()][y.size()];
}

DistributionSnapshot snapshot_of(std::vector<std::vector<double>> v) {
    DistributionSnapshot s;
    s.vectors = std::move(v);
    return s;
}

// ---- criteria ------------------------------------------------------------

Outcome mmd_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0, worst_self = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 1 + rng() % 16;
        auto draw = [&](std::size_t n) {
            std::vector<std::vector<double>> v(n, std::vector<double>(dim));
            for (auto& x : v) {
                double s = 0;
                for (auto& y : x) s += (y = u(rng));
                if (trial % 2) for (auto& y : x) y /= s;  // half the trials use frequency-like vectors
            }
            return v;
        };
        const auto p = draw(1 + rng() % 50);
        const auto q = draw(1 + rng() % 50);
        const double sigma = 0.05 + 2.0 * u(rng);
        worst = std::max(worst, std::abs(mmd_value(snapshot_of(p), snapshot_of(q), sigma) - oracle_mmd(p, q, sigma)));
        worst_self = std::max(worst_self, mmd_value(snapshot_of(p), snapshot_of(p), sigma));
    }
    const double secs = seconds_since(t0);
    return {worst <= kMmdOracleTol && worst_self <= kMmdSelfTol && secs < kBudgetMmd,
            fmt("max |impl-oracle| %.3g (tol %.0e), max MMD(P,P) %.3g (tol %.0e), %.2fs (budget %.0fs)", worst,
                kMmdOracleTol, worst_self, kMmdSelfTol, secs, kBudgetMmd)};
}

Outcome mmd_spot_values() {
    const double single = mmd_value(snapshot_of({{0.0}}), snapshot_of({{1.0}}), 1.0);
    const double single_err = std::abs(single - (2.0 - 2.0 * std::exp(-1.0)));
    const std::vector<std::vector<double>> p{{0.0}, {2.0}}, q{{1.0}, {1.0}};
    const double two = mmd_value(snapshot_of(p), snapshot_of(q), 1.0);
    const double oracle = oracle_mmd(p, q, 1.0);
    const bool ok = single_err <= kMmdClosedFormTol && std::abs(two - oracle) <= kMmdTwoPointTol &&
                    std::abs(oracle - kTwoPointValue) <= kMmdTwoPointTol;
    return {ok, fmt("single-point %.12f (err %.2g), two-point %.6f vs oracle %.6f", single, single_err, two, oracle)};
}

struct GradFamily {
    std::string name;
    double tolerance;
    std::size_t passed = 0;
    double worst = 0;
};

Outcome gradient_integrity() {
    using namespace omlog::neural;
    const auto t0 = Clock::now();
    std::vector<GradFamily> fams = {{"dense", kLayerGradTol},
                                    {"lstm", kLayerGradTol},
                                    {"embedding", kLayerGradTol},
                                    {"autoencoder", kLayerGradTol},
                                    {"model", kModelGradTol}};
    auto record = [](GradFamily& f, const GradientCheckReport& r) {
        f.passed += r.passed;
        f.worst = std::max(f.worst, r.max_rel_error);
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(1000 + seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto vec = [&](std::size_t n) {
            std::vector<double> v(n);
            for (auto& x : v) x = u(rng);
            return v;
        };
        auto dot = [](const std::vector<double>& a, std::span<const double> b) {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
            return s;
        };
        {
            const std::size_t in = 1 + rng() % 6, out = 1 + rng() % 6;
            Dense d("dense", in, out, rng);
            const auto x = vec(in), c = vec(out);
            ParameterStore store;
            d.collect(store);
            auto loss = [&] {
                std::vector<double> y(out);
                d.forward(x, y);
                double s = 0;
                for (std::size_t i = 0; i < out; ++i) s += std::tanh(y[i]) * c[i];
                return s;
            };
            auto backward = [&] {
                std::vector<double> y(out), dy(out);
                d.forward(x, y);
                for (std::size_t i = 0; i < out; ++i) dy[i] = c[i] * (1.0 - std::tanh(y[i]) * std::tanh(y[i]));
                d.backward(x, dy, {});
            };
            record(fams[0], gradient_check(store, loss, backward, kLayerGradTol));
        }
        {
            const std::size_t E = 1 + rng() % 5, H = 1 + rng() % 5, steps = 1 + rng() % 4;
            LstmCell cell("lstm", E, H, rng);
            std::vector<std::vector<double>> xs;
            for (std::size_t t = 0; t < steps; ++t) xs.push_back(vec(E));
            const auto c = vec(H);
            ParameterStore store;
            cell.collect(store);
            auto run = [&](std::vector<LstmCell::Step>& st) {
                std::vector<double> h(H, 0.0), cs(H, 0.0);
                st.resize(steps);
                for (std::size_t t = 0; t < steps; ++t) {
                    cell.forward(xs[t], h, cs, st[t]);
                    h = st[t].h;
                    cs = st[t].c;
                }
                return dot(c, h);
            };
            auto loss = [&] {
                std::vector<LstmCell::Step> st;
                return run(st);
            };
            auto backward = [&] {
                std::vector<LstmCell::Step> st;
                run(st);
                std::vector<double> dh = c, dc(H, 0.0), dx(E), dhp(H), dcp(H);
                for (std::size_t t = steps; t-- > 0;) {
                    cell.backward(st[t], dh, dc, dx, dhp, dcp);
                    dh = dhp;
                    dc = dcp;
                }
            };
            record(fams[1], gradient_check(store, loss, backward, kLayerGradTol));
        }
        {
            const std::size_t V = 2 + rng() % 6, D = 1 + rng() % 5;
            Embedding emb("embedding", V, D, rng);
            std::vector<std::size_t> ids(1 + rng() % 4);
            for (auto& i : ids) i = rng() % V;
            const auto c = vec(D);
            ParameterStore store;
            emb.collect(store);
            auto loss = [&] {
                double s = 0;
                for (auto i : ids) s += std::sin(dot(c, emb.lookup(i)));
                return s;
            };
            auto backward = [&] {
                for (auto i : ids) {
                    const double g = std::cos(dot(c, emb.lookup(i)));
                    std::vector<double> dy(D);
                    for (std::size_t k = 0; k < D; ++k) dy[k] = g * c[k];
                    emb.backward(i, dy);
                }
            };
            record(fams[2], gradient_check(store, loss, backward, kLayerGradTol));
        }
        {
            NormalityConfig nc;
            nc.features.component_cap = 1 + rng() % 4;
            nc.features.level_cap = 1 + rng() % 3;
            nc.hidden = 2 + rng() % 6;
            nc.code = 1 + rng() % 3;
            nc.seed = seed;
            NormalityModel m(nc);
            const auto x = vec(m.input_dim());
            auto store = m.parameters();
            record(fams[3], gradient_check(store, [&] { return m.window_error(x); }, [&] { m.loss_and_grad(x); },
                                           kLayerGradTol));
        }
        {
            NextEventConfig cfg;
            cfg.vocab_size = 5;
            cfg.window = 3;
            cfg.embed_dim = 2 + rng() % 4;
            cfg.hidden = 2 + rng() % 6;
            cfg.objective = seed % 2 ? Objective::SquaredError : Objective::CrossEntropy;
            cfg.seed = seed;
            NextEventModel m(cfg);
            std::vector<EventId> w(3);
            for (auto& e : w) e = static_cast<EventId>(rng() % 5);
            const auto target = static_cast<EventId>(rng() % 5);
            auto store = m.parameters();
            record(fams[4], gradient_check(store, [&] { return m.loss(w, target); },
                                           [&] { m.loss_and_grad(w, target); }, kModelGradTol));
        }
    }
    const double secs = seconds_since(t0);
    bool ok = secs < kBudgetGrad;
    std::string detail;
    for (const auto& f : fams) {
        ok = ok && f.passed == 20;
        detail += fmt("%s %zu/20 (max rel %.2g) ", f.name.c_str(), f.passed, f.worst);
    }
    return {ok, detail + fmt("%.1fs", secs)};
}

Outcome dtw_correctness() {
    std::mt19937_64 rng(404);
    std::size_t bad = 0;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<EventId> a(1 + rng() % 12), b(1 + rng() % 12);
        for (auto& e : a) e = static_cast<EventId>(rng() % 6);
        for (auto& e : b) e = static_cast<EventId>(rng() % 6);
        const double cat = dtw_distance(a, b, DtwCost::Categorical);
        const double cat_o = oracle_dtw(a, b, [](EventId x, EventId y) { return x == y ? 0.0 : 1.0; });
        const double abs = dtw_distance(a, b, DtwCost::AbsoluteDifference);
        const double abs_o = oracle_dtw(a, b, [](EventId x, EventId y) { return std::abs(double(x) - double(y)); });
        std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
        for (auto& v : x) v *= 0.37;
        const double real = dtw_distance(x, y);
        const double real_o = oracle_dtw(x, y, [](double p, double q) { return std::abs(p - q); });
        worst = std::max({worst, std::abs(cat - cat_o), std::abs(abs - abs_o), std::abs(real - real_o)});
        const bool props = dtw_distance(a, a) == 0.0 && dtw_distance(x, x) == 0.0 &&
                           dtw_distance(b, a, DtwCost::Categorical) == cat &&
                           dtw_distance(b, a, DtwCost::AbsoluteDifference) == abs && dtw_distance(y, x) == real;
        bad += !props;
    }
    const std::vector<EventId> p{1, 2, 3}, q{2, 2, 2};
    const double hand = dtw_distance(p, q, DtwCost::AbsoluteDifference);
    return {worst <= kDtwTol && bad == 0 && hand == 2.0,
            fmt("max |impl-oracle| %.2g over 100 pairs x 3 costs, property violations %zu, [1,2,3]~[2,2,2] = %g",
                worst, bad, hand)};
}

app::RunConfig parse_ini(const char* text, std::uint64_t seed) {
    auto cfg = app::parse_run_config(text, "<acceptance>");
    cfg.seed = seed;
    return cfg;
}

Outcome routing_soundness() {
    const auto t0 = Clock::now();
    auto cfg = parse_ini(kSyntheticIni, 1);
    // Two disjoint regimes; the second one (the test side) repeats whole
    // batches so that about 62% of test batches are exact copies.
    auto spec = app::make_synthetic_spec(cfg.synthetic, cfg.seed);
    spec.regimes.resize(2);
    spec.regimes[0].samples = 1000;
    spec.regimes[1].samples = 4000;
    spec.repeat_fraction = 0.62;
    spec.repeat_block = cfg.batch_size;
    const auto stream = app::synthesize(spec);
    const auto split = split_train_test(stream.samples, 0.2);
    const std::size_t first_test_block = 1000 / cfg.batch_size;

    const auto models = app::train_models(cfg, split.train, stream.vocab_size);
    auto run = [&](const char* mode) {
        auto c = cfg;
        c.mode = mode;
        auto m = models.detector;
        return run_stream(m, models.normality, split.train, split.test, app::stream_config(c));
    };
    const auto omlog = run("omlog");
    const auto meta = run("meta");

    // Unseen events and exact repeats, judged from the data alone.
    std::vector<bool> seen(stream.vocab_size, false);
    for (const auto& s : split.train)
        for (auto e : s.events) seen[e] = true;
    std::size_t unseen_batches = 0, unseen_online = 0, repeat_batches = 0, repeat_offline = 0;
    const auto batches = make_batches(split.test, cfg.batch_size);
    for (std::size_t k = 0; k < batches.size(); ++k) {
        bool unseen = false;
        for (const auto& s : batches[k])
            for (auto e : s.events) unseen |= !seen[e];
        for (const auto& s : batches[k])
            for (auto e : s.events) seen[e] = true;
        bool repeat = k > 0 && batches[k].size() == batches[k - 1].size();
        for (std::size_t i = 0; repeat && i < batches[k].size(); ++i)
            repeat = batches[k][i].events == batches[k - 1][i].events;
        const bool online = omlog.batches[k].route == Route::Online;
        if (unseen) {
            ++unseen_batches;
            unseen_online += online;
        }
        if (repeat && !unseen) {
            ++repeat_batches;
            repeat_offline += !online;
        }
    }
    std::size_t planted = 0;
    for (std::size_t b = first_test_block; b < stream.repeat_block.size(); ++b) planted += stream.repeat_block[b];
    const double stable = static_cast<double>(repeat_batches) / static_cast<double>(batches.size());
    const double ratio = static_cast<double>(omlog.update_steps) / static_cast<double>(meta.update_steps);
    const double gap = std::abs(omlog.metrics.f1 - meta.metrics.f1);
    const double secs = seconds_since(t0);
    const bool ok = unseen_batches > 0 && unseen_online == unseen_batches && repeat_batches == planted &&
                    repeat_offline == repeat_batches && ratio <= kStepRatioMax && gap < kF1GapMax &&
                    secs < kBudgetRouting;
    return {ok, fmt("unseen-event batches online %zu/%zu, repeat batches offline %zu/%zu (stable %.1f%% of %zu), "
                    "update steps OMLog/MetaOnly %zu/%zu = %.3f (max %.2f), F1 %.4f vs %.4f (gap %.4f < %.2f), %.0fs",
                    unseen_online, unseen_batches, repeat_offline, repeat_batches, 100.0 * stable, batches.size(),
                    omlog.update_steps, meta.update_steps, ratio, kStepRatioMax, omlog.metrics.f1, meta.metrics.f1,
                    gap, kF1GapMax, secs)};
}

Outcome ablation_ordering() {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    for (std::uint64_t seed : {1, 2, 3}) {
        auto cfg = parse_ini(kSyntheticIni, seed);
        const auto data = app::load_dataset(cfg);
        const auto split = split_train_test(data.samples, cfg.train_ratio);
        const auto models = app::train_models(cfg, split.train, data.vocab_size);
        auto f1 = [&](const char* mode) {
            auto c = cfg;
            c.mode = mode;
            auto m = models.detector;
            return run_stream(m, models.normality, split.train, split.test, app::stream_config(c)).metrics.f1;
        };
        const double off = f1("offline"), on = f1("online"), om = f1("omlog");
        const bool pass = om >= on && on >= off && om - off >= kAblationMargin;
        ok = ok && pass;
        detail += fmt("seed %llu: OMLog %.3f / Online %.3f / Offline %.3f%s; ", (unsigned long long)seed, om, on, off,
                      pass ? "" : " (violated)");
    }
    const double secs = seconds_since(t0);
    return {ok && secs < kBudgetAblation, detail + fmt("%.0fs", secs)};
}

Outcome structural_reductions() {
    auto cfg = parse_ini(kSmallIni, 5);
    const auto data = app::load_dataset(cfg);
    const auto split = split_train_test(data.samples, cfg.train_ratio);
    const auto models = app::train_models(cfg, split.train, data.vocab_size);
    auto run = [&](const char* mode, auto tweak) {
        auto c = cfg;
        c.mode = mode;
        auto sc = app::stream_config(c);
        tweak(sc);
        auto m = models.detector;
        return run_stream(m, models.normality, split.train, split.test, sc);
    };
    auto same_verdicts = [](const RunReport& a, const RunReport& b) {
        if (a.verdicts.size() != b.verdicts.size()) return false;
        for (std::size_t i = 0; i < a.verdicts.size(); ++i)
            if (!(a.verdicts[i].verdict == b.verdicts[i].verdict)) return false;
        return true;
    };
    const auto zero_eps = run("omlog", [](StreamConfig& s) { s.epsilon = 0.0; });
    const auto meta = run("meta", [](StreamConfig&) {});
    const bool r1 = same_verdicts(zero_eps, meta) && zero_eps.online_routes == zero_eps.batches.size();

    const auto inf_eps = run("omlog", [](StreamConfig& s) { s.epsilon = std::numeric_limits<double>::infinity(); });
    const auto offline = run("offline", [](StreamConfig&) {});
    std::size_t new_event_batches = 0;
    for (const auto& b : inf_eps.batches) new_event_batches += b.new_events;
    const bool r2 = new_event_batches == 0 && same_verdicts(inf_eps, offline) && inf_eps.update_steps == 0;

    // detect_batch with a frozen inner loop, and with no supports at all.
    bool r3 = true;
    for (int variant = 0; variant < 2; ++variant) {
        auto ep = cfg.episode;
        if (variant == 0) ep.inner_lr = 0.0;
        else ep.support_size = 0;
        auto live = models.detector;
        for (const auto b : make_batches(split.test, cfg.batch_size)) {
            auto off = live;
            off.grow_classes(std::max(off.vocab_size(), required_vocab(b)));
            const auto res = detect_batch(live, b, models.normality, ep);
            for (std::size_t i = 0; i < b.size(); ++i) r3 = r3 && res.verdicts[i] == off.score_sample(b[i]);
            r3 = r3 && res.update_steps == 0 && live.parameters().snapshot().values == off.parameters().snapshot().values;
        }
    }
    return {r1 && r2 && r3,
            fmt("eps=0 vs MetaOnly %s, eps=inf (no new events: %s) vs Offline %s, inner_lr=0 / empty supports vs "
                "offline scoring %s",
                r1 ? "identical" : "DIFFERENT", new_event_batches == 0 ? "yes" : "no", r2 ? "identical" : "DIFFERENT",
                r3 ? "bit-identical" : "DIFFERENT")};
}

Outcome metrics_identities() {
    std::mt19937_64 rng(808);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        // Random labels and predictions, so evaluate() is exercised too.
        const std::size_t n = 1 + rng() % 60;
        std::vector<DetectionVerdict> verdicts(n);
        std::vector<Sample> samples(n);
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool pred = rng() % 3 == 0, actual = rng() % 4 == 0;
            verdicts[i].anomalous = pred;
            samples[i].label = actual ? Label::Abnormal : Label::Normal;
            tp += pred && actual;
            fp += pred && !actual;
            tn += !pred && !actual;
            fn += !pred && actual;
        }
        const auto m = evaluate(verdicts, samples);
        const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
        const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        const bool exact = m.tp == tp && m.fp == fp && m.tn == tn && m.fn == fn && m.precision == p &&
                           m.recall == r && m.f1 == f && m.precision_undefined == (tp + fp == 0) &&
                           m.recall_undefined == (tp + fn == 0) && m.f1_undefined == (p + r == 0);
        mismatches += !exact;
    }
    return {mismatches == 0, fmt("%zu mismatches over 1000 random confusion tables", mismatches)};
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "omlog_acceptance_determinism";
    std::filesystem::remove_all(dir);
    std::vector<std::string> reports;
    app::RunConfig cfg = parse_ini(kSyntheticIni, 7);
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / ("run" + std::to_string(run));
        std::filesystem::create_directories(out);
        const auto data = app::load_dataset(cfg);
        const auto split = split_train_test(data.samples, cfg.train_ratio);
        auto models = app::train_models(cfg, split.train, data.vocab_size, out);
        app::write_manifest(out, "stream", cfg);
        auto loaded = app::load_models(out);
        loaded.detector.set_top_k(cfg.top_k);
        auto report = run_stream(loaded.detector, loaded.normality, split.train, split.test, app::stream_config(cfg));
        reports.push_back(to_json(report, false).dump());
        // The second run starts from the first run's written config.
        cfg = app::load_run_config(out / "config.ini");
    }
    std::filesystem::remove_all(dir);
    return {reports[0] == reports[1], fmt("RunReports %s (%zu bytes of JSON each, timings excluded)",
                                          reports[0] == reports[1] ? "identical" : "DIFFER", reports[0].size())};
}

Outcome full_data() {
    const char* bgl = std::getenv("OMLOG_BGL_LOG");
    const char* hdfs = std::getenv("OMLOG_HDFS_LOG");
    const char* hdfs_labels = std::getenv("OMLOG_HDFS_LABELS");
    if (!bgl && !hdfs) return {true, "no full dataset supplied (set OMLOG_BGL_LOG / OMLOG_HDFS_LOG)", true};
    bool ok = true;
    std::string detail;
    if (bgl) {
        const auto d = app::load_bgl(bgl, default_drain_config(DatasetFormat::Bgl), {100, 100});
        const bool counts = d.samples.size() == 42428 && d.abnormal_count() == 4745;
        const auto census = shift_census(make_batches(d.samples, 100), d.vocab_size, 0.001);
        const double frac = census.stable_fraction();
        const bool stable = std::abs(frac - kCensusTarget) <= kCensusRelTol * kCensusTarget;
        ok = ok && counts && stable;
        detail += fmt("BGL %zu samples / %zu abnormal%s, stable %.1f%% (target %.1f%% +-%.0f%% rel); ",
                      d.samples.size(), d.abnormal_count(), counts ? "" : " (MISMATCH)", 100 * frac,
                      100 * kCensusTarget, 100 * kCensusRelTol);
    }
    if (hdfs) {
        if (!hdfs_labels) return {false, "OMLOG_HDFS_LOG set without OMLOG_HDFS_LABELS"};
        const auto d = app::load_hdfs(hdfs, hdfs_labels, default_drain_config(DatasetFormat::Hdfs));
        const std::size_t abnormal = d.abnormal_count();
        const std::size_t normal = d.samples.size() - abnormal - d.unlabeled;
        const bool counts = normal == 575059 && abnormal == 16838;
        ok = ok && counts;
        detail += fmt("HDFS %zu normal / %zu abnormal%s", normal, abnormal, counts ? "" : " (MISMATCH)");
    }
    return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "MMD oracle equivalence", mmd_oracle},
        {2, "MMD closed-form spot values", mmd_spot_values},
        {3, "gradient integrity", gradient_integrity},
        {4, "DTW correctness", dtw_correctness},
        {5, "routing soundness", routing_soundness},
        {6, "ablation ordering", ablation_ordering},
        {7, "structural reductions", structural_reductions},
        {8, "metrics identities", metrics_identities},
        {9, "determinism", determinism},
        {10, "full-dataset census and counts", full_data},
    };
    // Optional filter: criterion ids on the command line.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const char* tag = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
        std::printf("%s [%d] %s: %s\n", tag, c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
