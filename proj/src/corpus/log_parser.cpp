#include "omlog/corpus/log_parser.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include "omlog/errors.hpp"

namespace omlog {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

// Splits off `n` whitespace-separated fields; the remainder is the message.
bool take_fields(std::string_view line, std::size_t n, std::vector<std::string_view>& fields,
                 std::string_view& rest) {
    fields.clear();
    std::size_t i = 0;
    for (std::size_t f = 0; f < n; ++f) {
        while (i < line.size() && line[i] == ' ') ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i == start) return false;
        fields.push_back(line.substr(start, i - start));
    }
    while (i < line.size() && line[i] == ' ') ++i;
    rest = line.substr(i);
    return true;
}

template <typename Int>
std::optional<Int> to_int(std::string_view s) {
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// "081109" "203615" -> epoch seconds (UTC)
std::optional<std::int64_t> hdfs_timestamp(std::string_view date, std::string_view time) {
    if (date.size() != 6 || time.size() != 6) return std::nullopt;
    auto yy = to_int<int>(date.substr(0, 2));
    auto mm = to_int<unsigned>(date.substr(2, 2));
    auto dd = to_int<unsigned>(date.substr(4, 2));
    auto h = to_int<int>(time.substr(0, 2));
    auto m = to_int<int>(time.substr(2, 2));
    auto s = to_int<int>(time.substr(4, 2));
    if (!yy || !mm || !dd || !h || !m || !s) return std::nullopt;
    using namespace std::chrono;
    const year_month_day ymd{year{2000 + *yy}, month{*mm}, day{*dd}};
    if (!ymd.ok() || *h > 23 || *m > 59 || *s > 60) return std::nullopt;
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + *h * 3600 + *m * 60 + *s;
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
    if (name == "hdfs") return DatasetFormat::Hdfs;
    if (name == "bgl") return DatasetFormat::Bgl;
    if (name == "generic") return DatasetFormat::Generic;
    throw ConfigError("unknown dataset format '" + std::string(name) + "'");
}

std::string_view to_string(DatasetFormat format) {
    switch (format) {
        case DatasetFormat::Hdfs: return "hdfs";
        case DatasetFormat::Bgl: return "bgl";
        case DatasetFormat::Generic: return "generic";
    }
    return "generic";
}

std::optional<HeaderFields> split_header(DatasetFormat format, std::string_view line) {
    line = trim(line);
    std::vector<std::string_view> f;
    std::string_view rest;
    HeaderFields out;
    switch (format) {
        case DatasetFormat::Hdfs: {
            if (!take_fields(line, 5, f, rest)) return std::nullopt;
            auto ts = hdfs_timestamp(f[0], f[1]);
            if (!ts) return std::nullopt;
            out.timestamp = *ts;
            out.level = f[3];
            out.component = f[4];
            if (!out.component.empty() && out.component.back() == ':') out.component.remove_suffix(1);
            break;
        }
        case DatasetFormat::Bgl: {
            if (!take_fields(line, 9, f, rest)) return std::nullopt;
            auto ts = to_int<std::int64_t>(f[1]);
            if (!ts) return std::nullopt;
            out.label = f[0] == "-" ? Label::Normal : Label::Abnormal;
            out.timestamp = *ts;
            out.component = f[7];
            out.level = f[8];
            break;
        }
        case DatasetFormat::Generic: {
            if (!take_fields(line, 3, f, rest)) return std::nullopt;
            auto ts = to_int<std::int64_t>(f[0]);
            if (!ts) return std::nullopt;
            out.timestamp = *ts;
            out.component = f[1];
            out.level = f[2];
            break;
        }
    }
    out.content = rest;
    return out;
}

DrainConfig default_drain_config(DatasetFormat format) {
    DrainConfig cfg;
    if (format == DatasetFormat::Hdfs) cfg.masks.push_back(R"(blk_-?\d+)");
    return cfg;
}

LogParser::LogParser(DatasetFormat format, DrainConfig drain) : format_(format), drain_(std::move(drain)) {}

std::optional<ParsedRecord> LogParser::parse(const RawLogRecord& line) {
    ++stats_.lines;
    auto fields = split_header(format_, line.text);
    if (!fields) {
        ++stats_.quarantined;
        return std::nullopt;
    }
    if (last_timestamp_ && fields->timestamp < *last_timestamp_) ++stats_.timestamp_regressions;
    last_timestamp_ = fields->timestamp;

    ParsedRecord rec;
    rec.line_no = line.line_no;
    rec.header.timestamp = fields->timestamp;
    rec.header.component = components_.intern(fields->component);
    rec.header.level = levels_.intern(fields->level);
    rec.event_id = drain_.learn(fields->content);
    rec.params = drain_.extract_params(fields->content, rec.event_id);
    rec.label = fields->label;
    ++stats_.parsed;
    return rec;
}

void LogParser::refresh_params(const RawLogRecord& line, ParsedRecord& record) const {
    auto fields = split_header(format_, line.text);
    if (!fields) throw DataError("line " + std::to_string(line.line_no) + " lost its header");
    record.params = drain_.extract_params(fields->content, record.event_id);
}

void parse_log_file(const std::filesystem::path& path, LogParser& parser,
                    const std::function<void(const ParsedRecord&)>& sink) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open log file " + path.string());

    // Pass 1: mine templates, remember the event of every accepted line.
    std::vector<std::pair<std::size_t, ParsedRecord>> accepted;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (trim(text).empty()) continue;
        auto rec = parser.parse(RawLogRecord{line_no, text});
        if (rec) {
            rec->params.clear();
            accepted.emplace_back(line_no, std::move(*rec));
        }
    }

    // Pass 2: params against the frozen templates.
    in.clear();
    in.seekg(0);
    line_no = 0;
    std::size_t next = 0;
    while (next < accepted.size() && std::getline(in, text)) {
        ++line_no;
        if (accepted[next].first != line_no) continue;
        auto& rec = accepted[next].second;
        parser.refresh_params(RawLogRecord{line_no, text}, rec);
        sink(rec);
        rec = ParsedRecord{};
        ++next;
    }
}

}  // namespace omlog
