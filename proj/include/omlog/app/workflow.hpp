#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "omlog/app/config.hpp"
#include "omlog/corpus/log_record.hpp"
#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"
#include "omlog/detectors/training.hpp"

namespace omlog::app {

inline constexpr const char* kVersion = "0.1.0";

struct TrainedModels {
    NextEventModel detector;
    NormalityModel normality;
    TrainingLog detector_log;
    TrainingLog normality_log;
    double seconds = 0.0;
};

// Trains both models on the normal training samples. The last
// validation_fraction of them is held out for checkpoint selection.
// Checkpoints land in `checkpoint_dir` when it is non-empty.
TrainedModels train_models(const RunConfig& cfg, std::span<const Sample> train, std::size_t vocab_size,
                           const std::filesystem::path& checkpoint_dir = {});

// Loads next_event.ckpt and normality.ckpt; DataError when either is missing.
TrainedModels load_models(const std::filesystem::path& dir);

nlohmann::json to_json(const TrainingLog& log);

// Writes manifest.json and manifest.<command>.json (command, version, seed,
// config, extras) plus config.ini.
void write_manifest(const std::filesystem::path& dir, const std::string& command, const RunConfig& cfg,
                    const nlohmann::json& extra = nlohmann::json::object());

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace omlog::app
