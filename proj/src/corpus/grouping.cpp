#include "omlog/corpus/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omlog/errors.hpp"

namespace omlog {

Sessionizer::Sessionizer(const std::string& key_pattern, std::uint32_t source)
    : pattern_(key_pattern), source_(source) {}

void Sessionizer::add(const ParsedRecord& record) {
    ++records_;
    std::vector<std::string> keys;
    for (const auto& p : record.params) {
        for (std::sregex_iterator it(p.begin(), p.end(), pattern_), end; it != end; ++it) {
            auto key = it->str();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(std::move(key));
        }
    }
    if (keys.empty()) {
        ++dropped_;
        return;
    }
    for (auto& key : keys) {
        auto [it, inserted] = index_.try_emplace(key, sessions_.size());
        if (inserted) {
            Sample s;
            s.origin = SampleOrigin{source_, record.line_no, sessions_.size()};
            sessions_.push_back(std::move(s));
            keys_.push_back(std::move(key));
        }
        auto& s = sessions_[it->second];
        s.events.push_back(record.event_id);
        s.headers.push_back(record.header);
    }
}

std::vector<Sample> Sessionizer::finish() {
    if (records_ > 0 && sessions_.empty()) {
        throw ConfigError("session key pattern matched no record");
    }
    index_.clear();
    return std::move(sessions_);
}

std::vector<Sample> sessionize(std::span<const ParsedRecord> records, const std::string& key_pattern,
                               std::size_t* dropped) {
    Sessionizer s(key_pattern);
    for (const auto& r : records) s.add(r);
    auto out = s.finish();
    if (dropped) *dropped = s.dropped();
    return out;
}

SlidingWindower::SlidingWindower(WindowSpec spec, std::uint32_t source) : spec_(spec), source_(source) {
    if (spec_.size == 0) throw std::invalid_argument("window size must be >= 1");
    if (spec_.step == 0) throw std::invalid_argument("window step must be >= 1");
}

void SlidingWindower::emit(std::size_t begin) {
    Sample s;
    s.origin = SampleOrigin{source_, buffer_[begin].line_no, out_.size()};
    bool abnormal = false;
    bool labelled = false;
    for (std::size_t i = begin; i < begin + spec_.size; ++i) {
        const auto& r = buffer_[i];
        s.events.push_back(r.event_id);
        s.headers.push_back(r.header);
        if (r.label) {
            labelled = true;
            abnormal = abnormal || *r.label == Label::Abnormal;
        }
    }
    if (labelled) s.label = abnormal ? Label::Abnormal : Label::Normal;
    out_.push_back(std::move(s));
}

void SlidingWindower::add(const ParsedRecord& record) {
    buffer_.push_back(record);
    buffer_.back().params.clear();
    while (consumed_ + buffer_.size() >= next_start_ + spec_.size) {
        emit(next_start_ - consumed_);
        next_start_ += spec_.step;
        // Drop records no future window can reach.
        const auto drop = std::min(next_start_ - consumed_, buffer_.size());
        if (drop > 4096 || drop == buffer_.size()) {
            buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(drop));
            consumed_ += drop;
        }
    }
}

std::vector<Sample> SlidingWindower::finish() {
    buffer_.clear();
    return std::move(out_);
}

std::vector<Sample> sliding_windows(std::span<const ParsedRecord> records, WindowSpec spec) {
    SlidingWindower w(spec);
    for (const auto& r : records) w.add(r);
    return w.finish();
}

TrainTestSplit split_train_test(std::vector<Sample> samples, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("train ratio must be in (0, 1)");
    const auto n = samples.size();
    const auto cut = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
    if (cut == 0 || cut == n) throw DataError("train/test split leaves one side empty");

    TrainTestSplit out;
    out.train.reserve(cut);
    out.test.reserve(n - cut);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < cut) {
            if (samples[i].is_abnormal()) {
                ++out.discarded_abnormal;
            } else {
                out.train.push_back(std::move(samples[i]));
            }
        } else {
            out.test.push_back(std::move(samples[i]));
        }
    }
    if (out.train.empty()) throw DataError("training side has no normal samples");
    return out;
}

}  // namespace omlog
