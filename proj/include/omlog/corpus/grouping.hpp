#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

// Extracts session keys from record params (e.g. HDFS block ids). A record
// may carry several distinct keys; it is appended to each of their sessions.
class Sessionizer {
public:
    explicit Sessionizer(const std::string& key_pattern, std::uint32_t source = 0);

    void add(const ParsedRecord& record);

    // Samples in order of first key appearance. Throws ConfigError when no key
    // was extracted from any record.
    std::vector<Sample> finish();

    // Key of the i-th produced sample (valid after finish()).
    const std::vector<std::string>& keys() const { return keys_; }
    std::size_t dropped() const { return dropped_; }

private:
    std::regex pattern_;
    std::uint32_t source_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> keys_;
    std::vector<Sample> sessions_;
    std::size_t dropped_ = 0;
    std::size_t records_ = 0;
};

std::vector<Sample> sessionize(std::span<const ParsedRecord> records, const std::string& key_pattern,
                               std::size_t* dropped = nullptr);

struct WindowSpec {
    std::size_t size = 100;
    std::size_t step = 100;
};

// Fixed-size windows starting at 0, step, 2*step, ...; incomplete trailing
// windows are dropped. A window is abnormal if any member record is.
class SlidingWindower {
public:
    explicit SlidingWindower(WindowSpec spec, std::uint32_t source = 0);

    void add(const ParsedRecord& record);
    std::vector<Sample> finish();

private:
    void emit(std::size_t begin);

    WindowSpec spec_;
    std::uint32_t source_;
    std::vector<ParsedRecord> buffer_;
    std::size_t consumed_ = 0;  // records discarded from the front of buffer_
    std::size_t next_start_ = 0;
    std::vector<Sample> out_;
};

std::vector<Sample> sliding_windows(std::span<const ParsedRecord> records, WindowSpec spec);

struct TrainTestSplit {
    std::vector<Sample> train;  // normal samples only
    std::vector<Sample> test;
    std::size_t discarded_abnormal = 0;
};

// Chronological split at floor(ratio * n); abnormal samples on the training
// side are discarded and counted.
TrainTestSplit split_train_test(std::vector<Sample> samples, double ratio);

}  // namespace omlog
