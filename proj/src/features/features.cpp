#include "omlog/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "omlog/errors.hpp"

namespace omlog {

std::vector<NextEventPair> next_event_pairs(const Sample& sample, std::size_t h) {
    if (h == 0) throw std::invalid_argument("next-event window must be >= 1");
    std::vector<NextEventPair> pairs;
    const auto& ev = sample.events;
    if (ev.size() <= h) return pairs;
    pairs.reserve(ev.size() - h);
    for (std::size_t i = 0; i + h < ev.size(); ++i) {
        pairs.push_back(NextEventPair{{ev.begin() + static_cast<std::ptrdiff_t>(i),
                                       ev.begin() + static_cast<std::ptrdiff_t>(i + h)},
                                      ev[i + h]});
    }
    return pairs;
}

std::size_t append_next_event_pairs(std::span<const Sample> samples, std::size_t h,
                                    std::vector<NextEventPair>& out) {
    std::size_t short_samples = 0;
    for (const auto& s : samples) {
        auto pairs = next_event_pairs(s, h);
        if (pairs.empty()) ++short_samples;
        out.insert(out.end(), std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end()));
    }
    return short_samples;
}

std::vector<HeaderFeatureVector> header_features(const Sample& sample, const HeaderFeatureConfig& cfg) {
    if (sample.headers.size() != sample.events.size()) {
        throw std::invalid_argument("sample headers are not aligned with events");
    }
    const auto dim = cfg.dimension();
    const auto level_base = 1 + cfg.component_cap + 1;
    std::vector<HeaderFeatureVector> out;
    out.reserve(sample.headers.size());
    for (std::size_t i = 0; i < sample.headers.size(); ++i) {
        const auto& h = sample.headers[i];
        HeaderFeatureVector v(dim, 0.0);
        if (i > 0) {
            const double dt = static_cast<double>(h.timestamp - sample.headers[i - 1].timestamp);
            v[0] = std::log1p(std::clamp(dt, 0.0, cfg.dt_clip_seconds));
        }
        v[1 + std::min<std::size_t>(h.component, cfg.component_cap)] = 1.0;
        v[level_base + std::min<std::size_t>(h.level, cfg.level_cap)] = 1.0;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<HeaderFeatureVector> pooled_header_windows(const Sample& sample, const HeaderFeatureConfig& cfg,
                                                       std::size_t subwindow) {
    if (subwindow == 0) throw std::invalid_argument("sub-window must be >= 1");
    const auto rows = header_features(sample, cfg);
    std::vector<HeaderFeatureVector> out;
    for (std::size_t begin = 0; begin < rows.size(); begin += subwindow) {
        const auto end = std::min(rows.size(), begin + subwindow);
        HeaderFeatureVector mean(cfg.dimension(), 0.0);
        for (std::size_t r = begin; r < end; ++r) {
            for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += rows[r][d];
        }
        const double n = static_cast<double>(end - begin);
        for (auto& x : mean) x /= n;
        out.push_back(std::move(mean));
    }
    return out;
}

FrequencyVector frequency_vector(const Sample& sample, std::size_t vocab_size) {
    FrequencyVector fv;
    fv.values.assign(vocab_size, 0.0);
    if (sample.events.empty()) {
        fv.degenerate = true;
        return fv;
    }
    for (auto e : sample.events) {
        if (e >= vocab_size) throw std::invalid_argument("event id exceeds vocabulary size");
        fv.values[e] += 1.0;
    }
    const double n = static_cast<double>(sample.events.size());
    for (auto& x : fv.values) x /= n;
    return fv;
}

std::map<EventId, std::vector<double>> read_event_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file " + path.string());
    std::map<EventId, std::vector<double>> out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        long long id = -1;
        std::size_t dim = 0;
        if (!(row >> id >> dim) || id < 0 || dim == 0) {
            throw DataError("malformed embedding row " + std::to_string(line_no));
        }
        if (expected_dim == 0) expected_dim = dim;
        if (dim != expected_dim) throw DataError("inconsistent embedding dimension at row " + std::to_string(line_no));
        std::vector<double> v(dim);
        for (auto& x : v) {
            if (!(row >> x) || !std::isfinite(x)) {
                throw DataError("bad embedding value at row " + std::to_string(line_no));
            }
        }
        out[static_cast<EventId>(id)] = std::move(v);
    }
    return out;
}

}  // namespace omlog
