#include "omlog/detectors/next_event_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "omlog/errors.hpp"
#include "omlog/neural/loss.hpp"

namespace omlog {

Objective parse_objective(std::string_view s) {
    if (s == "cross-entropy" || s == "ce") return Objective::CrossEntropy;
    if (s == "squared-error" || s == "mse") return Objective::SquaredError;
    throw ConfigError("unknown objective '" + std::string(s) + "'");
}

std::string_view to_string(Objective o) {
    return o == Objective::CrossEntropy ? "cross-entropy" : "squared-error";
}

std::size_t rank_of(std::span<const double> logits, std::size_t actual) {
    if (actual >= logits.size()) throw std::invalid_argument("class outside the classifier");
    const double a = logits[actual];
    std::size_t rank = 0;
    for (std::size_t c = 0; c < logits.size(); ++c) {
        if (logits[c] > a || (logits[c] == a && c < actual)) ++rank;
    }
    return rank;
}

bool in_top_k(std::span<const double> logits, std::size_t actual, std::size_t k) {
    return rank_of(logits, actual) < k;
}

NextEventModel::NextEventModel(const NextEventConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.vocab_size == 0 || cfg.embed_dim == 0 || cfg.hidden == 0 || cfg.window == 0 || cfg.top_k == 0) {
        throw ConfigError("next-event model sizes must be positive");
    }
    embedding_ = neural::Embedding("embedding", cfg.vocab_size, cfg.embed_dim, rng_);
    lstm_ = neural::LstmCell("lstm", cfg.embed_dim, cfg.hidden, rng_);
    classifier_ = neural::Dense("classifier", cfg.hidden, cfg.vocab_size, rng_);
}

void NextEventModel::check_window(std::span<const EventId> window) const {
    if (window.size() != cfg_.window) {
        throw std::invalid_argument("window of " + std::to_string(window.size()) + " events, model expects " +
                                    std::to_string(cfg_.window));
    }
    for (auto id : window) {
        if (id >= vocab_size()) throw std::invalid_argument("event " + std::to_string(id) + " outside vocabulary");
    }
}

std::vector<double> NextEventModel::encode(std::span<const EventId> window,
                                           std::vector<neural::LstmCell::Step>* steps) const {
    const auto H = cfg_.hidden;
    std::vector<double> h(H, 0.0), c(H, 0.0);
    neural::LstmCell::Step local;
    if (steps) steps->resize(window.size());
    for (std::size_t t = 0; t < window.size(); ++t) {
        auto& s = steps ? (*steps)[t] : local;
        lstm_.forward(embedding_.lookup(window[t]), h, c, s);
        h = s.h;
        c = s.c;
    }
    return h;
}

void NextEventModel::logits(std::span<const EventId> window, std::vector<double>& out) const {
    check_window(window);
    const auto h = encode(window, nullptr);
    out.resize(vocab_size());
    classifier_.forward(h, out);
}

namespace {

double objective_value(Objective o, std::span<const double> z, std::size_t target, std::span<double> dz) {
    return o == Objective::CrossEntropy ? neural::softmax_cross_entropy(z, target, dz, "classifier logits")
                                        : neural::softmax_squared_error(z, target, dz, "classifier logits");
}

}  // namespace

double NextEventModel::loss(std::span<const EventId> window, EventId target) const {
    if (target >= vocab_size()) throw std::invalid_argument("target outside vocabulary");
    std::vector<double> z;
    logits(window, z);
    return objective_value(cfg_.objective, z, target, {});
}

double NextEventModel::loss_and_grad(std::span<const EventId> window, EventId target) {
    check_window(window);
    if (target >= vocab_size()) throw std::invalid_argument("target outside vocabulary");
    std::vector<neural::LstmCell::Step> steps;
    const auto h_last = encode(window, &steps);
    std::vector<double> z(vocab_size()), dz(vocab_size());
    classifier_.forward(h_last, z);
    const double value = objective_value(cfg_.objective, z, target, dz);

    const auto H = cfg_.hidden;
    std::vector<double> dh(H), dc(H, 0.0), dx(cfg_.embed_dim), dh_prev(H), dc_prev(H);
    classifier_.backward(h_last, dz, dh);
    for (std::size_t t = steps.size(); t-- > 0;) {
        lstm_.backward(steps[t], dh, dc, dx, dh_prev, dc_prev);
        embedding_.backward(window[t], dx);
        dh.swap(dh_prev);
        dc.swap(dc_prev);
    }
    return value;
}

bool NextEventModel::is_window_normal(std::span<const EventId> window, EventId actual) const {
    std::vector<double> z;
    logits(window, z);
    return in_top_k(z, actual, cfg_.top_k);
}

DetectionVerdict NextEventModel::score_sample(const Sample& sample) const {
    DetectionVerdict v;
    const auto h = cfg_.window;
    if (sample.size() <= h) {
        v.too_short = true;
        return v;
    }
    std::vector<double> z;
    const std::span<const EventId> events(sample.events);
    for (std::size_t i = 0; i + h < events.size(); ++i) {
        logits(events.subspan(i, h), z);
        const auto actual = events[i + h];
        const auto r = rank_of(z, actual);
        v.score = std::max(v.score, static_cast<double>(r));
        if (r >= cfg_.top_k && !v.offending_window) {
            v.anomalous = true;
            v.offending_window = i;
        }
    }
    return v;
}

std::optional<double> NextEventModel::sample_loss(const Sample& sample) const {
    const auto h = cfg_.window;
    if (sample.size() <= h) return std::nullopt;
    const std::span<const EventId> events(sample.events);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i + h < events.size(); ++i, ++n) sum += loss(events.subspan(i, h), events[i + h]);
    return sum / static_cast<double>(n);
}

void NextEventModel::grow_classes(std::size_t new_vocab_size) {
    if (new_vocab_size < vocab_size()) {
        throw std::invalid_argument("cannot shrink the classifier from " + std::to_string(vocab_size()) + " to " +
                                    std::to_string(new_vocab_size));
    }
    if (new_vocab_size == vocab_size()) return;
    embedding_.grow(new_vocab_size, rng_);
    classifier_.grow_outputs(new_vocab_size, rng_);
    cfg_.vocab_size = new_vocab_size;
}

std::size_t NextEventModel::import_embeddings(const std::map<EventId, std::vector<double>>& vectors) {
    std::size_t n = 0;
    for (const auto& [id, v] : vectors) {
        if (id >= embedding_.vocab()) continue;
        if (v.size() != embedding_.dim()) {
            throw DataError("embedding for event " + std::to_string(id) + " has dimension " +
                            std::to_string(v.size()) + ", model uses " + std::to_string(embedding_.dim()));
        }
        std::copy(v.begin(), v.end(), embedding_.table.value.row(id).begin());
        ++n;
    }
    return n;
}

neural::ParameterStore NextEventModel::parameters() {
    neural::ParameterStore store;
    embedding_.collect(store);
    lstm_.collect(store);
    classifier_.collect(store);
    return store;
}

nlohmann::json NextEventModel::manifest() const {
    return {{"model", "next-event"},
            {"vocab_size", vocab_size()},
            {"embed_dim", cfg_.embed_dim},
            {"hidden", cfg_.hidden},
            {"h", cfg_.window},
            {"top_k", cfg_.top_k},
            {"objective", std::string(to_string(cfg_.objective))},
            {"seed", cfg_.seed}};
}

NextEventModel next_event_model_from_manifest(const nlohmann::json& m) {
    try {
        if (m.at("model").get<std::string>() != "next-event") throw DataError("checkpoint is not a next-event model");
        NextEventConfig cfg;
        cfg.vocab_size = m.at("vocab_size").get<std::size_t>();
        cfg.embed_dim = m.at("embed_dim").get<std::size_t>();
        cfg.hidden = m.at("hidden").get<std::size_t>();
        cfg.window = m.at("h").get<std::size_t>();
        cfg.top_k = m.at("top_k").get<std::size_t>();
        cfg.objective = parse_objective(m.at("objective").get<std::string>());
        cfg.seed = m.at("seed").get<std::uint64_t>();
        return NextEventModel(cfg);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad next-event manifest: ") + e.what());
    }
}

}  // namespace omlog
