#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "omlog/corpus/log_record.hpp"
#include "omlog/detectors/next_event_model.hpp"
#include "omlog/detectors/normality_model.hpp"

namespace omlog {

struct EpisodeConfig {
    std::size_t tasks_per_batch = 10;  // T
    std::size_t support_size = 20;     // n
    std::size_t inner_epochs = 5;
    double inner_lr = 0.00001;
};

void validate(const EpisodeConfig& cfg);

// One meta-task over a batch. The query is the contiguous slice
// [query_begin, query_end) of the batch; support holds indices into the
// normality-filtered normals, nearest first.
struct MetaTask {
    std::size_t index = 0;
    std::size_t query_begin = 0;
    std::size_t query_end = 0;
    std::vector<std::size_t> support;

    std::size_t query_size() const { return query_end - query_begin; }
};

// Median of the query samples' window indices (mean of the middle two for an
// even count).
double median_origin(std::span<const Sample> query);

// min(T, |batch|) contiguous slices with sizes differing by at most one, larger
// slices first. Each support is the n normals closest to the slice's median
// origin; ties go to the earlier normal.
std::vector<MetaTask> build_meta_tasks(std::span<const Sample> batch, std::span<const Sample> normals,
                                       const EpisodeConfig& cfg);

struct EpisodeResult {
    std::vector<DetectionVerdict> verdicts;  // one per query sample
    double loss = 0.0;                       // mean objective per query window after the update
    std::size_t query_windows = 0;
    std::size_t support_pairs = 0;
    std::size_t update_steps = 0;
    bool aborted = false;  // inner loss went non-finite; weights restored
    double seconds = 0.0;
};

// Fine-tunes the live model on the support's next-event pairs, then scores the
// query. The model must already cover every event in the task.
EpisodeResult run_episode(NextEventModel& model, const MetaTask& task, std::span<const Sample> batch,
                          std::span<const Sample> normals, const EpisodeConfig& cfg);

struct TaskReport {
    std::size_t index = 0;
    std::size_t query_size = 0;
    std::size_t support_size = 0;
    double loss = 0.0;
    std::size_t update_steps = 0;
    bool aborted = false;
    double seconds = 0.0;
};

struct TaskBatchResult {
    std::vector<DetectionVerdict> verdicts;  // one per batch sample, batch order
    double meta_loss = 0.0;                  // (1/T) sum of task losses
    std::size_t filtered_normals = 0;
    std::size_t update_steps = 0;
    std::vector<TaskReport> tasks;
};

// Grows the classifier to cover the batch, filters high-confidence normals,
// builds the tasks and runs their episodes in order. Updates persist.
TaskBatchResult detect_batch(NextEventModel& model, std::span<const Sample> batch, const NormalityModel& normality,
                             const EpisodeConfig& cfg);

// Largest event id in the samples plus one (0 when there are none).
std::size_t required_vocab(std::span<const Sample> samples);

}  // namespace omlog
