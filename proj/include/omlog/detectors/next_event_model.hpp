#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omlog/corpus/log_record.hpp"
#include "omlog/neural/layers.hpp"
#include "omlog/neural/parameter_store.hpp"

namespace omlog {

enum class Objective { CrossEntropy, SquaredError };

Objective parse_objective(std::string_view s);
std::string_view to_string(Objective o);

struct NextEventConfig {
    std::size_t vocab_size = 1;
    std::size_t embed_dim = 16;
    std::size_t hidden = 64;
    std::size_t window = 10;  // h
    std::size_t top_k = 9;    // K
    Objective objective = Objective::CrossEntropy;
    std::uint64_t seed = 0;
};

struct DetectionVerdict {
    bool anomalous = false;
    std::optional<std::size_t> offending_window;
    bool too_short = false;  // fewer than h + 1 events, normal by policy
    // Worst (largest) 0-based rank of an actual event among the predictions.
    double score = 0.0;

    friend bool operator==(const DetectionVerdict&, const DetectionVerdict&) = default;
};

// True iff `actual` is among the k largest logits. Ties rank the lower class
// id first, so the rank of `actual` is the number of classes with a larger
// logit plus the number of lower-id classes with an equal one.
bool in_top_k(std::span<const double> logits, std::size_t actual, std::size_t k);
std::size_t rank_of(std::span<const double> logits, std::size_t actual);

// Embedding -> LSTM unrolled over h events -> dense classifier over the
// current vocabulary. The classifier grows as new events appear.
class NextEventModel {
public:
    NextEventModel() = default;
    explicit NextEventModel(const NextEventConfig& cfg);

    const NextEventConfig& config() const { return cfg_; }
    std::size_t vocab_size() const { return classifier_.out(); }
    std::size_t window() const { return cfg_.window; }
    std::size_t top_k() const { return cfg_.top_k; }
    void set_top_k(std::size_t k) { cfg_.top_k = k; }
    void set_objective(Objective o) { cfg_.objective = o; }

    void logits(std::span<const EventId> window, std::vector<double>& out) const;
    // Objective value for one pair, no gradients.
    double loss(std::span<const EventId> window, EventId target) const;
    // Objective value; accumulates gradients into the parameters.
    double loss_and_grad(std::span<const EventId> window, EventId target);

    bool is_window_normal(std::span<const EventId> window, EventId actual) const;
    DetectionVerdict score_sample(const Sample& sample) const;
    // Mean objective over the sample's next-event pairs; nullopt when too short.
    std::optional<double> sample_loss(const Sample& sample) const;

    // Adds classes (embedding rows and classifier rows). Existing rows are
    // untouched; shrinking throws.
    void grow_classes(std::size_t new_vocab_size);

    // Overwrites embedding rows for known ids; dimensions must match.
    std::size_t import_embeddings(const std::map<EventId, std::vector<double>>& vectors);

    neural::ParameterStore parameters();
    nlohmann::json manifest() const;

private:
    void check_window(std::span<const EventId> window) const;
    // Runs the LSTM; fills steps (may be null) and returns the last hidden state.
    std::vector<double> encode(std::span<const EventId> window, std::vector<neural::LstmCell::Step>* steps) const;

    NextEventConfig cfg_;
    neural::Rng rng_;
    neural::Embedding embedding_;
    neural::LstmCell lstm_;
    neural::Dense classifier_;
};

// Rebuilds a model from a checkpoint manifest and tensors.
NextEventModel next_event_model_from_manifest(const nlohmann::json& manifest);

}  // namespace omlog
