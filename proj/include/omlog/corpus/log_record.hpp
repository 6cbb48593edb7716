#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace omlog {

using EventId = std::uint32_t;

inline constexpr std::string_view kWildcard = "<*>";

enum class Label : std::uint8_t { Normal, Abnormal };

struct RawLogRecord {
    std::size_t line_no = 0;
    std::string text;
};

struct LogHeader {
    std::int64_t timestamp = 0;  // epoch seconds
    std::uint32_t component = 0;
    std::uint32_t level = 0;

    friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

struct LogEvent {
    EventId event_id = 0;
    std::vector<std::string> tokens;

    std::string text() const;
    std::size_t placeholder_count() const;
};

struct ParsedRecord {
    std::size_t line_no = 0;
    LogHeader header;
    EventId event_id = 0;
    std::vector<std::string> params;
    // Per-line ground truth, when the dataset carries one (BGL alert tags).
    std::optional<Label> label;
};

// Append-only list of templates; ids are dense and never reused.
class EventVocabulary {
public:
    EventId add(std::vector<std::string> tokens);
    void set_tokens(EventId id, std::vector<std::string> tokens);

    const LogEvent& at(EventId id) const { return events_.at(id); }
    std::size_t size() const { return events_.size(); }
    const std::vector<LogEvent>& events() const { return events_; }

private:
    std::vector<LogEvent> events_;
};

// Dense string -> id table (components, levels).
class StringInterner {
public:
    std::uint32_t intern(std::string_view s);
    std::optional<std::uint32_t> find(std::string_view s) const;
    const std::string& name(std::uint32_t id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

struct SampleOrigin {
    std::uint32_t source = 0;
    std::size_t start_line = 0;
    // Ordinal position of the sample in its stream; used as the temporal coordinate.
    std::size_t window_index = 0;

    friend bool operator==(const SampleOrigin&, const SampleOrigin&) = default;
};

struct Sample {
    std::vector<EventId> events;
    std::vector<LogHeader> headers;
    std::optional<Label> label;
    SampleOrigin origin;

    std::size_t size() const { return events.size(); }
    bool is_abnormal() const { return label == Label::Abnormal; }

    friend bool operator==(const Sample&, const Sample&) = default;
};

// Throws std::invalid_argument when the Sample invariants do not hold.
void validate(const Sample& sample);

}  // namespace omlog
