#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omlog/corpus/log_record.hpp"
#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"
#include "omlog/drift/shift_detector.hpp"
#include "omlog/meta/episode.hpp"
#include "omlog/pipeline/metrics.hpp"

namespace omlog {

enum class StreamMode { Offline, Online, OnlineDsd, MetaOnly, OMLog };

StreamMode parse_stream_mode(std::string_view s);
std::string_view to_string(StreamMode m);

struct StreamConfig {
    std::size_t batch_size = 100;  // B
    StreamMode mode = StreamMode::OMLog;
    std::uint64_t seed = 0;
    EpisodeConfig episode;
    // Online / OnlineDsd fine-tuning budget per batch.
    std::size_t online_epochs = 1;
    double online_lr = 0.00001;
    CalibrationOptions calibration;
    double epsilon_multiplier = 1.0;
    // Explicit values skip the corresponding calibration step.
    std::optional<double> sigma;
    std::optional<double> epsilon;
};

void validate(const StreamConfig& cfg);
nlohmann::json to_json(const StreamConfig& cfg);

struct BatchRecord {
    std::size_t index = 0;
    std::size_t begin = 0;  // offset of the batch in the test stream
    std::size_t size = 0;
    Route route = Route::Offline;
    double mmd = 0.0;
    bool new_events = false;
    std::size_t filtered_normals = 0;
    std::size_t update_steps = 0;
    double meta_loss = 0.0;
    std::vector<TaskReport> tasks;
    Metrics metrics;
    double seconds = 0.0;
};

struct VerdictRow {
    std::size_t batch = 0;
    SampleOrigin origin;
    std::optional<Label> label;
    DetectionVerdict verdict;
};

struct RunReport {
    StreamMode mode = StreamMode::OMLog;
    nlohmann::json config;  // stream config; callers may attach the full run config
    MmdConfig mmd;
    std::vector<BatchRecord> batches;
    std::vector<VerdictRow> verdicts;
    Metrics metrics;
    std::size_t update_steps = 0;
    std::size_t online_routes = 0;
    std::size_t too_short = 0;
    // (1/K) sum over batches of the per-batch meta loss.
    double meta_loss_cumulative = 0.0;
    double train_seconds = 0.0;  // filled by the caller
    double test_seconds = 0.0;
};

// Consumes `test` in order, in batches of B (the last one may be short).
// `model` is the trained detector and is updated in place; `train` holds the
// normal training samples (DSD calibration and the first reference batch).
RunReport run_stream(NextEventModel& model, const NormalityModel& normality, std::span<const Sample> train,
                     std::span<const Sample> test, const StreamConfig& cfg);

// Calibrated sigma/epsilon for the stream config, with overrides applied.
MmdConfig calibrate_stream(std::span<const Sample> train, std::size_t vocab_size, const StreamConfig& cfg);

nlohmann::json to_json(const RunReport& r, bool include_timings = true);
void write_batch_csv(const std::filesystem::path& path, const RunReport& r, bool include_timings = true);
void write_verdict_csv(const std::filesystem::path& path, const RunReport& r);

struct SweepPoint {
    double epsilon_multiplier = 1.0;
    std::size_t tasks_per_batch = 0;
    RunReport report;
};

// One run per (epsilon multiplier, T) pair, each from a copy of `initial`.
std::vector<SweepPoint> sweep(const NextEventModel& initial, const NormalityModel& normality,
                              std::span<const Sample> train, std::span<const Sample> test, const StreamConfig& base,
                              std::span<const double> epsilon_multipliers, std::span<const std::size_t> tasks);

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> points);

}  // namespace omlog
