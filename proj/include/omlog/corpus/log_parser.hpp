#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>

#include "omlog/corpus/drain.hpp"
#include "omlog/corpus/log_record.hpp"

namespace omlog {

enum class DatasetFormat { Hdfs, Bgl, Generic };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

// Header fields of one line, borrowed from the line text.
struct HeaderFields {
    std::int64_t timestamp = 0;
    std::string_view component;
    std::string_view level;
    std::string_view content;
    std::optional<Label> label;
};

// HDFS:    "081109 203615 148 INFO dfs.DataNode$PacketResponder: message"
// BGL:     "- 1117838570 2005.06.03 NODE 2005-06-03-15.42.50.675872 NODE RAS KERNEL INFO message"
//          (first field "-" marks a normal line, anything else is an alert tag)
// Generic: "<epoch seconds> <component> <level> message"
std::optional<HeaderFields> split_header(DatasetFormat format, std::string_view line);

// Drain defaults per dataset (HDFS block ids are masked as whole tokens).
DrainConfig default_drain_config(DatasetFormat format);

struct ParseStats {
    std::size_t lines = 0;
    std::size_t parsed = 0;
    std::size_t quarantined = 0;
    std::size_t timestamp_regressions = 0;
};

// Streaming parser: header split, interning and Drain template mining.
// Lines whose header cannot be parsed are quarantined and counted.
class LogParser {
public:
    LogParser(DatasetFormat format, DrainConfig drain);

    std::optional<ParsedRecord> parse(const RawLogRecord& line);

    // Recomputes params of a previously parsed line against the current template.
    void refresh_params(const RawLogRecord& line, ParsedRecord& record) const;

    const EventVocabulary& vocabulary() const { return drain_.vocabulary(); }
    const StringInterner& components() const { return components_; }
    const StringInterner& levels() const { return levels_; }
    StringInterner& components() { return components_; }
    StringInterner& levels() { return levels_; }
    const ParseStats& stats() const { return stats_; }
    DatasetFormat format() const { return format_; }

private:
    DatasetFormat format_;
    DrainParser drain_;
    StringInterner components_;
    StringInterner levels_;
    ParseStats stats_;
    std::optional<std::int64_t> last_timestamp_;
};

// Two passes over a file: templates are mined on the first pass and frozen,
// then every line is re-emitted with params extracted against its final
// template. Blank lines are skipped.
void parse_log_file(const std::filesystem::path& path, LogParser& parser,
                    const std::function<void(const ParsedRecord&)>& sink);

}  // namespace omlog
