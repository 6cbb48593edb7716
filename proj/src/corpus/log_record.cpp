#include "omlog/corpus/log_record.hpp"

#include <stdexcept>

namespace omlog {

std::string LogEvent::text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::size_t LogEvent::placeholder_count() const {
    std::size_t n = 0;
    for (const auto& t : tokens) {
        for (auto pos = t.find(kWildcard); pos != std::string::npos;
             pos = t.find(kWildcard, pos + kWildcard.size())) {
            ++n;
        }
    }
    return n;
}

EventId EventVocabulary::add(std::vector<std::string> tokens) {
    if (tokens.empty()) throw std::invalid_argument("template must have at least one token");
    const auto id = static_cast<EventId>(events_.size());
    events_.push_back(LogEvent{id, std::move(tokens)});
    return id;
}

void EventVocabulary::set_tokens(EventId id, std::vector<std::string> tokens) {
    if (tokens.empty()) throw std::invalid_argument("template must have at least one token");
    events_.at(id).tokens = std::move(tokens);
}

std::uint32_t StringInterner::intern(std::string_view s) {
    if (auto it = ids_.find(std::string(s)); it != ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<std::uint32_t> StringInterner::find(std::string_view s) const {
    if (auto it = ids_.find(std::string(s)); it != ids_.end()) return it->second;
    return std::nullopt;
}

void validate(const Sample& sample) {
    if (sample.events.empty()) throw std::invalid_argument("sample has no events");
    if (sample.headers.size() != sample.events.size()) {
        throw std::invalid_argument("sample headers are not aligned with events");
    }
}

}  // namespace omlog
