#include "omlog/analysis/similarity.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

#include "omlog/drift/mmd.hpp"
#include "omlog/drift/shift_detector.hpp"
#include "omlog/errors.hpp"
#include "omlog/features/features.hpp"

namespace omlog {
namespace {

using PairList = std::vector<std::pair<const Sample*, const Sample*>>;

// Mean DTW over the pairs, subsampled without replacement when above the cap.
double mean_distance(PairList pairs, const SimilarityConfig& cfg, std::mt19937_64& rng, std::size_t& used) {
    if (pairs.size() > cfg.pair_cap) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(cfg.pair_cap);
    }
    used = pairs.size();
    double sum = 0.0;
    for (const auto& [a, b] : pairs) {
        if (a->events.empty() || b->events.empty()) continue;
        sum += dtw_distance(a->events, b->events, cfg.cost);
    }
    return used ? sum / static_cast<double>(used) : 0.0;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os.precision(12);
    return os;
}

bool same_events(std::span<const Sample> a, std::span<const Sample> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].events != b[i].events) return false;
    }
    return true;
}

}  // namespace

std::vector<std::span<const Sample>> make_batches(std::span<const Sample> stream, std::size_t batch_size) {
    if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
    std::vector<std::span<const Sample>> out;
    for (std::size_t i = 0; i < stream.size(); i += batch_size) {
        out.push_back(stream.subspan(i, std::min(batch_size, stream.size() - i)));
    }
    return out;
}

SimilarityReport similarity_report(std::span<const std::span<const Sample>> batches, const SimilarityConfig& cfg) {
    if (cfg.pair_cap == 0) throw std::invalid_argument("pair cap must be positive");
    SimilarityReport report;
    std::mt19937_64 rng(cfg.seed);
    double sum_in = 0.0, sum_ex = 0.0;
    std::size_t n_in = 0, n_ex = 0;
    for (std::size_t k = 0; k < batches.size(); ++k) {
        BatchSimilarity b;
        b.index = k;
        const auto batch = batches[k];
        if (batch.size() >= 2) {
            PairList pairs;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                for (std::size_t j = i + 1; j < batch.size(); ++j) pairs.emplace_back(&batch[i], &batch[j]);
            }
            b.internal = mean_distance(std::move(pairs), cfg, rng, b.internal_pairs);
            sum_in += *b.internal;
            ++n_in;
        }
        if (k > 0 && cfg.history > 0 && !batch.empty()) {
            PairList pairs;
            for (std::size_t h = k - std::min(k, cfg.history); h < k; ++h) {
                for (const auto& s : batch) {
                    for (const auto& t : batches[h]) pairs.emplace_back(&s, &t);
                }
            }
            if (!pairs.empty()) {
                b.external = mean_distance(std::move(pairs), cfg, rng, b.external_pairs);
                sum_ex += *b.external;
                ++n_ex;
            }
        }
        report.batches.push_back(b);
    }
    report.mean_internal = n_in ? sum_in / static_cast<double>(n_in) : 0.0;
    report.mean_external = n_ex ? sum_ex / static_cast<double>(n_ex) : 0.0;
    return report;
}

ShiftCensus shift_census(std::span<const std::span<const Sample>> batches, std::size_t vocab_size, double threshold,
                         double sigma, std::uint64_t seed) {
    if (batches.size() < 2) throw std::invalid_argument("shift census needs at least two batches");
    std::vector<DistributionSnapshot> snaps;
    snaps.reserve(batches.size());
    for (auto b : batches) snaps.push_back(DistributionSnapshot::from_samples(b, vocab_size));
    ShiftCensus c;
    c.batches = batches.size();
    c.threshold = threshold;
    c.sigma = sigma > 0.0 ? sigma : median_heuristic_sigma(snaps, CalibrationOptions{}.sigma_subsample, seed);
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        const double m = mmd_value(snaps[i - 1], snaps[i], c.sigma);
        c.mmd.push_back(m);
        if (m <= threshold) ++c.below_threshold;
        if (same_events(batches[i - 1], batches[i])) ++c.identical;
    }
    return c;
}

void write_similarity_csv(const std::filesystem::path& path, const SimilarityReport& report) {
    auto os = open_out(path);
    // Distances, not similarities: smaller means closer.
    os << "batch,internal_distance,external_distance,internal_pairs,external_pairs\n";
    for (const auto& b : report.batches) {
        os << b.index << ',';
        if (b.internal) os << *b.internal;
        os << ',';
        if (b.external) os << *b.external;
        os << ',' << b.internal_pairs << ',' << b.external_pairs << '\n';
    }
}

void write_census_csv(const std::filesystem::path& path, const ShiftCensus& census) {
    auto os = open_out(path);
    os << "pair,from_batch,to_batch,mmd,below_threshold\n";
    for (std::size_t i = 0; i < census.mmd.size(); ++i) {
        os << i << ',' << i << ',' << i + 1 << ',' << census.mmd[i] << ','
           << (census.mmd[i] <= census.threshold ? 1 : 0) << '\n';
    }
}

void write_frequency_csv(const std::filesystem::path& path, std::span<const Sample> samples, std::size_t vocab_size) {
    auto os = open_out(path);
    os << "sample,window_index,label";
    for (std::size_t e = 0; e < vocab_size; ++e) os << ",e" << e;
    os << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto f = frequency_vector(samples[i], vocab_size);
        os << i << ',' << samples[i].origin.window_index << ','
           << (samples[i].label ? (samples[i].is_abnormal() ? "abnormal" : "normal") : "");
        for (double v : f.values) os << ',' << v;
        os << '\n';
    }
}

}  // namespace omlog
