#pragma once

#include <cstddef>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "omlog/corpus/log_record.hpp"

namespace omlog {

struct DrainConfig {
    std::size_t depth = 4;
    double similarity_threshold = 0.5;
    std::size_t max_children = 100;
    // Extra full-token regexes replaced by the wildcard before tree descent
    // (e.g. HDFS block ids). Built-in numeric masks always apply.
    std::vector<std::string> masks;
};

// One whitespace token after masking, plus the substrings the masks removed.
struct MaskedToken {
    std::string raw;
    std::string masked;
    std::vector<std::string> captures;
};

// Fixed-depth prefix-tree template miner (Drain).
//
// learn() is the single-writer path: it routes a message through the tree by
// token count and leading tokens, then either merges it into the most similar
// cluster of the leaf or opens a new template. extract_params() is read-only
// and may be called concurrently once learning has stopped.
class DrainParser {
public:
    explicit DrainParser(DrainConfig config = {});
    ~DrainParser();
    DrainParser(DrainParser&&) noexcept;
    DrainParser& operator=(DrainParser&&) noexcept;

    EventId learn(std::string_view content);

    // Parameters of `content` with respect to the current template of `id`.
    std::vector<std::string> extract_params(std::string_view content, EventId id) const;

    std::vector<MaskedToken> mask(std::string_view content) const;

    const EventVocabulary& vocabulary() const { return vocabulary_; }
    const DrainConfig& config() const { return config_; }

private:
    struct Node;
    struct Cluster {
        EventId id;
        std::vector<std::string> tokens;
    };

    Cluster* search(const std::vector<std::string>& tokens);
    void insert(Cluster* cluster);

    DrainConfig config_;
    std::vector<std::regex> masks_;
    std::unique_ptr<Node> root_;
    std::vector<std::unique_ptr<Cluster>> clusters_;
    EventVocabulary vocabulary_;
};

// Similarity of a message to a template: equal non-wildcard positions / length.
// Returns {similarity, wildcard count}; lengths must match.
std::pair<double, std::size_t> template_similarity(const std::vector<std::string>& templ,
                                                   const std::vector<std::string>& tokens);

std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace omlog
