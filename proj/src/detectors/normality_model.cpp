#include "omlog/detectors/normality_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "omlog/errors.hpp"
#include "omlog/neural/loss.hpp"

namespace omlog {
namespace {

void apply_tanh(std::vector<double>& v) {
    for (auto& x : v) x = std::tanh(x);
}

// dz = da * (1 - a^2), in place.
void tanh_backward(std::span<const double> a, std::vector<double>& d) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - a[i] * a[i];
}

}  // namespace

NormalityModel::NormalityModel(const NormalityConfig& cfg) : cfg_(cfg) {
    if (cfg.hidden == 0 || cfg.code == 0 || cfg.subwindow == 0) throw ConfigError("normality model sizes must be positive");
    if (!(cfg.threshold > 0.0)) throw ConfigError("normality threshold must be positive");
    neural::Rng rng(cfg.seed);
    const auto in = cfg.features.dimension();
    enc1_ = neural::Dense("normality.enc1", in, cfg.hidden, rng);
    enc2_ = neural::Dense("normality.enc2", cfg.hidden, cfg.code, rng);
    dec1_ = neural::Dense("normality.dec1", cfg.code, cfg.hidden, rng);
    dec2_ = neural::Dense("normality.dec2", cfg.hidden, in, rng);
}

void NormalityModel::set_threshold(double t) {
    if (!(t > 0.0)) throw ConfigError("normality threshold must be positive");
    cfg_.threshold = t;
}

void NormalityModel::forward(std::span<const double> x, Trace& t) const {
    if (x.size() != input_dim()) throw std::invalid_argument("normality input has the wrong dimension");
    t.a1.resize(cfg_.hidden);
    t.a2.resize(cfg_.code);
    t.a3.resize(cfg_.hidden);
    t.y.resize(input_dim());
    enc1_.forward(x, t.a1);
    apply_tanh(t.a1);
    enc2_.forward(t.a1, t.a2);
    apply_tanh(t.a2);
    dec1_.forward(t.a2, t.a3);
    apply_tanh(t.a3);
    dec2_.forward(t.a3, t.y);
}

void NormalityModel::reconstruct(std::span<const double> x, std::vector<double>& out) const {
    Trace t;
    forward(x, t);
    out = std::move(t.y);
}

double NormalityModel::window_error(std::span<const double> x) const {
    Trace t;
    forward(x, t);
    return neural::mse_loss(t.y, x, {}, "reconstruction");
}

double NormalityModel::loss_and_grad(std::span<const double> x) {
    Trace t;
    forward(x, t);
    std::vector<double> dy(t.y.size());
    const double loss = neural::mse_loss(t.y, x, dy, "reconstruction");
    std::vector<double> d3(cfg_.hidden), d2(cfg_.code), d1(cfg_.hidden);
    dec2_.backward(t.a3, dy, d3);
    tanh_backward(t.a3, d3);
    dec1_.backward(t.a2, d3, d2);
    tanh_backward(t.a2, d2);
    enc2_.backward(t.a1, d2, d1);
    tanh_backward(t.a1, d1);
    enc1_.backward(x, d1, {});
    return loss;
}

std::vector<HeaderFeatureVector> NormalityModel::windows(const Sample& sample) const {
    return pooled_header_windows(sample, cfg_.features, cfg_.subwindow);
}

double NormalityModel::sample_error(const Sample& sample) const {
    const auto ws = windows(sample);
    if (ws.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& w : ws) sum += window_error(w);
    return sum / static_cast<double>(ws.size());
}

neural::ParameterStore NormalityModel::parameters() {
    neural::ParameterStore store;
    enc1_.collect(store);
    enc2_.collect(store);
    dec1_.collect(store);
    dec2_.collect(store);
    return store;
}

nlohmann::json NormalityModel::manifest() const {
    return {{"model", "normality"},
            {"component_cap", cfg_.features.component_cap},
            {"level_cap", cfg_.features.level_cap},
            {"dt_clip_seconds", cfg_.features.dt_clip_seconds},
            {"subwindow", cfg_.subwindow},
            {"hidden", cfg_.hidden},
            {"code", cfg_.code},
            {"threshold", cfg_.threshold},
            {"seed", cfg_.seed}};
}

NormalityModel normality_model_from_manifest(const nlohmann::json& m) {
    try {
        if (m.at("model").get<std::string>() != "normality") throw DataError("checkpoint is not a normality model");
        NormalityConfig cfg;
        cfg.features.component_cap = m.at("component_cap").get<std::size_t>();
        cfg.features.level_cap = m.at("level_cap").get<std::size_t>();
        cfg.features.dt_clip_seconds = m.at("dt_clip_seconds").get<double>();
        cfg.subwindow = m.at("subwindow").get<std::size_t>();
        cfg.hidden = m.at("hidden").get<std::size_t>();
        cfg.code = m.at("code").get<std::size_t>();
        cfg.threshold = m.at("threshold").get<double>();
        cfg.seed = m.at("seed").get<std::uint64_t>();
        return NormalityModel(cfg);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad normality manifest: ") + e.what());
    }
}

std::vector<std::size_t> normality_filter_indices(const NormalityModel& model, std::span<const Sample> batch) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (model.sample_error(batch[i]) < model.threshold()) keep.push_back(i);
    }
    return keep;
}

std::vector<Sample> normality_filter(const NormalityModel& model, std::span<const Sample> batch) {
    std::vector<Sample> out;
    for (auto i : normality_filter_indices(model, batch)) out.push_back(batch[i]);
    return out;
}

}  // namespace omlog
