#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "omlog/corpus/log_record.hpp"
#include "omlog/features/features.hpp"
#include "omlog/neural/layers.hpp"
#include "omlog/neural/parameter_store.hpp"

namespace omlog {

struct NormalityConfig {
    HeaderFeatureConfig features;
    std::size_t subwindow = 10;  // records mean-pooled into one input vector
    std::size_t hidden = 16;
    std::size_t code = 4;
    double threshold = 0.02;  // MSE cutoff, strict
    std::uint64_t seed = 0;
};

// Autoencoder over pooled header feature windows:
// in -> hidden (tanh) -> code (tanh) -> hidden (tanh) -> in (linear).
class NormalityModel {
public:
    NormalityModel() = default;
    explicit NormalityModel(const NormalityConfig& cfg);

    const NormalityConfig& config() const { return cfg_; }
    std::size_t input_dim() const { return enc1_.in(); }
    double threshold() const { return cfg_.threshold; }
    void set_threshold(double t);

    void reconstruct(std::span<const double> x, std::vector<double>& out) const;
    double window_error(std::span<const double> x) const;
    double loss_and_grad(std::span<const double> x);

    std::vector<HeaderFeatureVector> windows(const Sample& sample) const;
    // Mean reconstruction MSE over the sample's pooled windows (0 for an empty sample).
    double sample_error(const Sample& sample) const;

    neural::ParameterStore parameters();
    nlohmann::json manifest() const;

private:
    struct Trace {
        std::vector<double> a1, a2, a3, y;
    };
    void forward(std::span<const double> x, Trace& t) const;

    NormalityConfig cfg_;
    neural::Dense enc1_, enc2_, dec1_, dec2_;
};

NormalityModel normality_model_from_manifest(const nlohmann::json& manifest);

// Indices of samples with sample_error < threshold, in input order.
std::vector<std::size_t> normality_filter_indices(const NormalityModel& model, std::span<const Sample> batch);
std::vector<Sample> normality_filter(const NormalityModel& model, std::span<const Sample> batch);

}  // namespace omlog
