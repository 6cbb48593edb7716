#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

// Joins params inside one column of the parsed-record file.
inline constexpr char kParamSeparator = '\x1f';

// Tab-separated rows: line_no, timestamp, component, level, event_id, params.
class ParsedRecordWriter {
public:
    explicit ParsedRecordWriter(std::ostream& out);
    void write(const ParsedRecord& record, const StringInterner& components, const StringInterner& levels);

private:
    std::ostream& out_;
};

// Tab-separated rows: event_id, template string.
void write_template_catalog(std::ostream& out, const EventVocabulary& vocabulary);
EventVocabulary read_template_catalog(const std::filesystem::path& path);

}  // namespace omlog
