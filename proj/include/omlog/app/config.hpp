#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omlog/corpus/drain.hpp"
#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"
#include "omlog/detectors/training.hpp"
#include "omlog/pipeline/stream.hpp"

namespace omlog::app {

struct SyntheticSettings {
    std::size_t regimes = 3;
    std::size_t alphabet = 8;  // events per regime
    std::size_t shared_events = 0;  // events each regime shares with the previous one
    std::size_t samples_per_regime = 1000;
    std::size_t sample_length = 20;
    double anomaly_rate = 0.1;
    double alien_fraction = 0.5;  // share of anomalies using an alien event
    double header_anomaly_prob = 0.85;
    double repeat_fraction = 0.0;
    std::size_t repeat_block = 100;
    std::size_t component_pool = 4;
};

// Every setting a run depends on. Serialised as a sectioned key = value file.
struct RunConfig {
    // [dataset]
    std::string format = "synthetic";  // synthetic | hdfs | bgl | generic
    std::string log_path;
    std::string label_path;
    std::string session_pattern = R"(blk_-?\d+)";
    std::size_t window_size = 100;
    std::size_t window_step = 100;
    double train_ratio = 0.5;
    // [parser]
    std::size_t drain_depth = 4;
    double drain_similarity = 0.5;
    std::size_t drain_max_children = 100;
    // [features]
    HeaderFeatureConfig features;
    // [model]
    std::size_t embed_dim = 16;
    std::size_t hidden = 64;
    std::size_t window = 10;
    std::size_t top_k = 9;
    std::string objective = "cross-entropy";
    // [normality]
    std::size_t normality_subwindow = 10;
    std::size_t normality_hidden = 16;
    std::size_t normality_code = 4;
    double normality_threshold = 0.02;
    double normality_lr = 0.00001;
    std::size_t normality_epochs = 100;
    // [train]
    neural::SgdConfig train;
    double validation_fraction = 0.1;
    // [drift]
    double epsilon_divisor = 10.0;
    double epsilon_multiplier = 1.0;
    std::size_t sigma_subsample = 512;
    double sigma = 0.0;     // > 0 overrides the median heuristic
    double epsilon = -1.0;  // >= 0 overrides calibration
    // [meta]
    EpisodeConfig episode;
    // [online]
    std::size_t online_epochs = 1;
    double online_lr = 0.00001;
    // [stream]
    std::size_t batch_size = 100;
    std::string mode = "omlog";
    // [synthetic]
    SyntheticSettings synthetic;
    // [run]
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

// Reads a config file over the defaults. Unknown sections or keys, and
// malformed values, throw ConfigError naming the line.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view text, const std::string& origin = "<config>");
// Applies one "section.key=value" override.
void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

std::string to_ini(const RunConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);
void validate(const RunConfig& cfg);

DrainConfig drain_config(const RunConfig& cfg);
NextEventConfig next_event_config(const RunConfig& cfg, std::size_t vocab_size);
NormalityConfig normality_config(const RunConfig& cfg);
StreamConfig stream_config(const RunConfig& cfg);
TrainOptions next_event_train_options(const RunConfig& cfg);
TrainOptions normality_train_options(const RunConfig& cfg);

}  // namespace omlog::app
