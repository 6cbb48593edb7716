#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "omlog/app/config.hpp"
#include "omlog/corpus/grouping.hpp"
#include "omlog/corpus/log_parser.hpp"
#include "omlog/corpus/log_record.hpp"

namespace omlog::app {

struct Dataset {
    std::vector<Sample> samples;
    std::size_t vocab_size = 0;
    std::vector<std::string> templates;  // by event id, empty for synthetic data
    std::vector<std::size_t> shift_points;
    ParseStats parse_stats;
    std::size_t dropped_records = 0;  // records without a session key
    std::size_t unlabeled = 0;

    std::size_t abnormal_count() const;
};

// "BlockId,Label" rows with Normal/Anomaly labels (header row optional).
std::unordered_map<std::string, Label> read_block_labels(const std::filesystem::path& path);

// Sees every parsed record (after the second parse pass) before grouping.
using RecordTap = std::function<void(const ParsedRecord&, const LogParser&)>;

// HDFS: block-id sessions labelled from the label file.
Dataset load_hdfs(const std::filesystem::path& log, const std::filesystem::path& labels, const DrainConfig& drain,
                  const std::string& session_pattern = R"(blk_-?\d+)", const RecordTap& tap = {});
// BGL: sliding windows, abnormal when any line carries an alert tag.
Dataset load_bgl(const std::filesystem::path& log, const DrainConfig& drain, WindowSpec windows,
                 const RecordTap& tap = {});
// Generic "<epoch> <component> <level> message" lines in sliding windows, unlabeled.
Dataset load_generic(const std::filesystem::path& log, const DrainConfig& drain, WindowSpec windows,
                     const RecordTap& tap = {});

// Dispatches on cfg.format; "synthetic" runs the generator. Zero samples throw DataError.
Dataset load_dataset(const RunConfig& cfg, const RecordTap& tap = {});

// JSON sample-set file:
//   {"vocab_size": n, "templates": [...], "shift_points": [...],
//    "samples": [{"events": [...], "headers": [[ts, comp, level], ...],
//                 "label": "normal" | "abnormal" | null, "origin": [source, line, index]}]}
void write_sample_set(const std::filesystem::path& path, const Dataset& data);
Dataset read_sample_set(const std::filesystem::path& path);

}  // namespace omlog::app
