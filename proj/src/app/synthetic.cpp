#include "omlog/app/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "omlog/errors.hpp"

namespace omlog::app {
namespace {

using Rng = std::mt19937_64;

constexpr std::uint32_t kInfo = 0, kWarn = 1, kError = 2;
constexpr std::int64_t kEpoch0 = 1'600'000'000;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::size_t next_state(const std::vector<double>& row, Rng& rng) {
    const double u = uniform(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        acc += row[j];
        if (u < acc) return j;
    }
    for (std::size_t j = row.size(); j-- > 0;) {
        if (row[j] > 0.0) return j;
    }
    return 0;
}

std::int64_t short_gap(Rng& rng) {
    return static_cast<std::int64_t>(std::llround(std::exponential_distribution<double>(1.0)(rng)));
}

Sample fresh_sample(const SyntheticSpec& spec, const Regime& regime, Rng& rng, std::int64_t& clock) {
    const auto L = spec.sample_length;
    const auto A = regime.alphabet.size();

    bool anomalous = uniform(rng) < spec.anomaly_rate;
    const std::size_t anomaly_at = L / 2 + pick(rng, L - L / 2);
    const bool header_anomaly = anomalous && uniform(rng) < spec.header_anomaly_prob;
    const bool want_alien = uniform(rng) < spec.alien_fraction;

    Sample s;
    std::size_t state = pick(rng, A);
    for (std::size_t i = 0; i < L; ++i) {
        EventId raw = regime.alphabet[state];
        if (i > 0) {
            std::size_t next = next_state(regime.transitions[state], rng);
            raw = regime.alphabet[next];
            if (anomalous && i == anomaly_at) {
                std::vector<std::size_t> forbidden;
                for (std::size_t j = 0; j < A; ++j) {
                    if (regime.transitions[state][j] == 0.0) forbidden.push_back(j);
                }
                if ((want_alien || forbidden.empty()) && !spec.alien_events.empty()) {
                    raw = spec.alien_events[pick(rng, spec.alien_events.size())];
                    next = pick(rng, A);
                } else if (!forbidden.empty()) {
                    next = forbidden[pick(rng, forbidden.size())];
                    raw = regime.alphabet[next];
                } else {
                    anomalous = false;  // nothing to inject
                }
            }
            state = next;
        }
        std::uint32_t level = uniform(rng) < spec.warn_rate ? kWarn : kInfo;
        std::int64_t dt = i == 0 ? 1 + short_gap(rng) : short_gap(rng);
        if (header_anomaly && anomalous && i >= anomaly_at) {
            level = kError;
            dt = 60 + static_cast<std::int64_t>(pick(rng, 3540));
        }
        clock += dt;
        s.events.push_back(raw);
        s.headers.push_back(LogHeader{clock, static_cast<std::uint32_t>(raw % spec.component_pool), level});
    }
    s.label = anomalous ? Label::Abnormal : Label::Normal;
    return s;
}

std::vector<std::vector<double>> cycle_chain(std::size_t A, Rng& rng) {
    std::vector<std::vector<double>> t(A, std::vector<double>(A, 0.0));
    if (A == 1) {
        t[0][0] = 1.0;
        return t;
    }
    std::vector<std::size_t> perm(A);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < A; ++k) {
        const auto from = perm[k];
        const auto to = perm[(k + 1) % A];
        if (A == 2) {
            t[from][to] = 1.0;
            continue;
        }
        std::size_t extra;
        do {
            extra = pick(rng, A);
        } while (extra == to || extra == from);
        t[from][to] = 0.75;
        t[from][extra] = 0.25;
    }
    return t;
}

}  // namespace

void validate(const SyntheticSpec& spec) {
    if (spec.regimes.empty()) throw ConfigError("synthetic spec needs at least one regime");
    if (spec.sample_length < 2) throw ConfigError("synthetic samples need at least two events");
    if (spec.component_pool == 0) throw ConfigError("component pool must be positive");
    if (!(spec.anomaly_rate >= 0.0 && spec.anomaly_rate <= 1.0)) throw ConfigError("anomaly rate must be in [0, 1]");
    if (!(spec.repeat_fraction >= 0.0 && spec.repeat_fraction < 1.0)) {
        throw ConfigError("repeat fraction must be in [0, 1)");
    }
    if (spec.repeat_fraction > 0.0 && spec.repeat_block == 0) throw ConfigError("repeat block must be positive");
    for (std::size_t r = 0; r < spec.regimes.size(); ++r) {
        const auto& g = spec.regimes[r];
        const auto where = "regime " + std::to_string(r) + ": ";
        if (g.alphabet.empty()) throw ConfigError(where + "empty alphabet");
        if (g.samples == 0) throw ConfigError(where + "zero duration");
        if (g.transitions.size() != g.alphabet.size()) throw ConfigError(where + "transition matrix has wrong size");
        for (const auto& row : g.transitions) {
            if (row.size() != g.alphabet.size()) throw ConfigError(where + "transition matrix is not square");
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0)) throw ConfigError(where + "negative transition probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(where + "transition row does not sum to 1");
        }
        for (auto a : spec.alien_events) {
            if (std::find(g.alphabet.begin(), g.alphabet.end(), a) != g.alphabet.end()) {
                throw ConfigError(where + "alien event " + std::to_string(a) + " is part of the alphabet");
            }
        }
    }
}

SyntheticSpec make_synthetic_spec(const SyntheticSettings& s, std::uint64_t seed) {
    if (s.regimes == 0 || s.alphabet == 0) throw ConfigError("synthetic settings need regimes and an alphabet");
    if (s.shared_events >= s.alphabet) throw ConfigError("shared_events must be smaller than the alphabet");
    SyntheticSpec spec;
    Rng rng(seed ^ 0x5eed5eedULL);
    const std::size_t stride = s.alphabet - s.shared_events;
    for (std::size_t r = 0; r < s.regimes; ++r) {
        Regime g;
        for (std::size_t i = 0; i < s.alphabet; ++i) g.alphabet.push_back(static_cast<EventId>(r * stride + i));
        g.transitions = cycle_chain(s.alphabet, rng);
        g.samples = s.samples_per_regime;
        spec.regimes.push_back(std::move(g));
    }
    const auto first_alien = static_cast<EventId>((s.regimes - 1) * stride + s.alphabet);
    for (EventId a = 0; a < 4; ++a) spec.alien_events.push_back(first_alien + a);
    spec.sample_length = s.sample_length;
    spec.anomaly_rate = s.anomaly_rate;
    spec.alien_fraction = s.alien_fraction;
    spec.header_anomaly_prob = s.header_anomaly_prob;
    spec.repeat_fraction = s.repeat_fraction;
    spec.repeat_block = s.repeat_block;
    spec.component_pool = s.component_pool;
    spec.seed = seed;
    return spec;
}

std::vector<std::size_t> SyntheticStream::shift_batches(std::size_t b, std::size_t offset) const {
    std::vector<std::size_t> out;
    for (auto p : shift_points) {
        if (p < offset) continue;
        const auto k = (p - offset) / b;
        if (out.empty() || out.back() != k) out.push_back(k);
    }
    return out;
}

SyntheticStream synthesize(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    SyntheticStream out;

    std::size_t total = 0;
    std::vector<std::size_t> regime_start;
    for (const auto& g : spec.regimes) {
        regime_start.push_back(total);
        out.regime_of.insert(out.regime_of.end(), g.samples, regime_start.size() - 1);
        total += g.samples;
    }
    for (std::size_t r = 1; r < regime_start.size(); ++r) out.shift_points.push_back(regime_start[r]);

    // Blocks eligible for repetition lie, together with their predecessor,
    // inside one regime. The chosen ones are spread evenly (Bresenham-style).
    const std::size_t B = spec.repeat_fraction > 0.0 ? spec.repeat_block : std::max<std::size_t>(total, 1);
    const std::size_t blocks = (total + B - 1) / B;
    out.block_size = B;
    out.repeat_block.assign(blocks, false);
    if (spec.repeat_fraction > 0.0) {
        std::vector<std::size_t> eligible;
        for (std::size_t b = 1; b < blocks; ++b) {
            const auto first = (b - 1) * B;
            const auto last = std::min(total, (b + 1) * B) - 1;
            if (out.regime_of[first] == out.regime_of[last] && (b + 1) * B <= total) eligible.push_back(b);
        }
        const auto want = std::min<std::size_t>(
            eligible.size(), static_cast<std::size_t>(std::llround(spec.repeat_fraction * static_cast<double>(blocks))));
        for (std::size_t i = 0; i < want; ++i) {
            const auto j = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * eligible.size() / want);
            out.repeat_block[eligible[j]] = true;
        }
    }

    std::int64_t clock = kEpoch0;
    out.samples.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        const auto b = i / B;
        Sample s;
        if (out.repeat_block[b]) {
            s = out.samples[i - B];
            const auto shift = clock - s.headers.front().timestamp + 1;
            for (auto& h : s.headers) h.timestamp += shift;
            clock = s.headers.back().timestamp;
        } else {
            s = fresh_sample(spec, spec.regimes[out.regime_of[i]], rng, clock);
        }
        s.origin = SampleOrigin{0, i, i};
        out.samples.push_back(std::move(s));
    }

    // Renumber events by first appearance.
    std::unordered_map<EventId, EventId> remap;
    for (auto& s : out.samples) {
        for (auto& e : s.events) {
            auto [it, inserted] = remap.try_emplace(e, static_cast<EventId>(remap.size()));
            e = it->second;
        }
    }
    out.vocab_size = remap.size();
    return out;
}

}  // namespace omlog::app
