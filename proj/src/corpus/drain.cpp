#include "omlog/corpus/drain.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace omlog {
namespace {

constexpr std::string_view kEmptyMessage = "<empty>";

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool has_digit(std::string_view s) { return std::any_of(s.begin(), s.end(), is_digit); }

bool all_digits(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_digit); }

bool is_numeric(std::string_view s) {
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        return std::all_of(s.begin() + 2, s.end(),
                           [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
    }
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) return all_digits(s);
    return all_digits(s.substr(0, dot)) && all_digits(s.substr(dot + 1));
}

// 10.0.0.1, /10.0.0.1:50010
bool is_ip_address(std::string_view s) {
    if (!s.empty() && s[0] == '/') s.remove_prefix(1);
    if (const auto colon = s.find(':'); colon != std::string_view::npos) {
        if (!all_digits(s.substr(colon + 1))) return false;
        s = s.substr(0, colon);
    }
    int groups = 0;
    while (true) {
        const auto dot = s.find('.');
        if (!all_digits(s.substr(0, dot))) return false;
        ++groups;
        if (dot == std::string_view::npos) break;
        s.remove_prefix(dot + 1);
    }
    return groups == 4;
}

bool is_separator(char c) {
    return c == '.' || c == '_' || c == ':' || c == '=' || c == '#' || c == '/' || c == '-';
}

}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const auto start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
}

std::pair<double, std::size_t> template_similarity(const std::vector<std::string>& templ,
                                                   const std::vector<std::string>& tokens) {
    if (templ.size() != tokens.size()) throw std::invalid_argument("template length mismatch");
    std::size_t same = 0;
    std::size_t wildcards = 0;
    for (std::size_t i = 0; i < templ.size(); ++i) {
        if (templ[i] == kWildcard) {
            ++wildcards;
        } else if (templ[i] == tokens[i]) {
            ++same;
        }
    }
    return {static_cast<double>(same) / static_cast<double>(templ.size()), wildcards};
}

struct DrainParser::Node {
    std::map<std::string, std::unique_ptr<Node>, std::less<>> children;
    std::vector<Cluster*> clusters;
};

DrainParser::DrainParser(DrainConfig config)
    : config_(std::move(config)), root_(std::make_unique<Node>()) {
    if (config_.depth < 3) throw std::invalid_argument("drain depth must be >= 3");
    if (config_.max_children < 2) throw std::invalid_argument("drain max_children must be >= 2");
    for (const auto& m : config_.masks) masks_.emplace_back(m);
}

DrainParser::~DrainParser() = default;
DrainParser::DrainParser(DrainParser&&) noexcept = default;
DrainParser& DrainParser::operator=(DrainParser&&) noexcept = default;

std::vector<MaskedToken> DrainParser::mask(std::string_view content) const {
    std::vector<MaskedToken> out;
    for (auto raw : split_whitespace(content)) {
        MaskedToken tok{std::string(raw), std::string(raw), {}};
        if (has_digit(raw)) {
            const bool custom = std::any_of(masks_.begin(), masks_.end(), [&](const std::regex& re) {
                return std::regex_match(raw.begin(), raw.end(), re);
            });
            if (custom || is_numeric(raw) || is_ip_address(raw)) {
                tok.masked = std::string(kWildcard);
                tok.captures.emplace_back(raw);
            } else if (is_digit(raw.back())) {
                // Trailing number after a separator: core.55239 -> core.<*>
                auto start = raw.size();
                while (start > 0 && is_digit(raw[start - 1])) --start;
                if (start >= 2 && raw[start - 1] == '-' && is_separator(raw[start - 2])) --start;
                if (start >= 1 && start < raw.size() && is_separator(raw[start - 1])) {
                    tok.masked = std::string(raw.substr(0, start)) + std::string(kWildcard);
                    tok.captures.emplace_back(raw.substr(start));
                }
            }
        }
        out.push_back(std::move(tok));
    }
    if (out.empty()) out.push_back(MaskedToken{"", std::string(kEmptyMessage), {}});
    return out;
}

DrainParser::Cluster* DrainParser::search(const std::vector<std::string>& tokens) {
    auto len_it = root_->children.find(std::to_string(tokens.size()));
    if (len_it == root_->children.end()) return nullptr;
    Node* node = len_it->second.get();
    const auto layers = std::min(config_.depth - 3, tokens.size());
    for (std::size_t i = 0; i < layers; ++i) {
        if (auto it = node->children.find(tokens[i]); it != node->children.end()) {
            node = it->second.get();
        } else if (auto wc = node->children.find(kWildcard); wc != node->children.end()) {
            node = wc->second.get();
        } else {
            return nullptr;
        }
    }
    Cluster* best = nullptr;
    double best_sim = -1.0;
    std::size_t best_wildcards = 0;
    for (Cluster* c : node->clusters) {
        const auto [sim, wildcards] = template_similarity(c->tokens, tokens);
        if (best == nullptr || sim > best_sim || (sim == best_sim && wildcards > best_wildcards)) {
            best = c;
            best_sim = sim;
            best_wildcards = wildcards;
        }
    }
    return (best != nullptr && best_sim >= config_.similarity_threshold) ? best : nullptr;
}

void DrainParser::insert(Cluster* cluster) {
    const auto& tokens = cluster->tokens;
    auto& len_node = root_->children[std::to_string(tokens.size())];
    if (!len_node) len_node = std::make_unique<Node>();
    Node* node = len_node.get();
    const auto layers = std::min(config_.depth - 3, tokens.size());
    const std::string wildcard(kWildcard);
    for (std::size_t i = 0; i < layers; ++i) {
        const auto& token = tokens[i];
        auto& children = node->children;
        if (auto it = children.find(token); it != children.end()) {
            node = it->second.get();
            continue;
        }
        const bool has_wildcard = children.count(wildcard) > 0;
        auto descend = [&](const std::string& key) {
            auto& child = children[key];
            if (!child) child = std::make_unique<Node>();
            node = child.get();
        };
        if (has_digit(token)) {
            descend(wildcard);
        } else if (has_wildcard) {
            descend(children.size() < config_.max_children ? token : wildcard);
        } else if (children.size() + 1 < config_.max_children) {
            descend(token);
        } else {
            descend(wildcard);
        }
    }
    node->clusters.push_back(cluster);
}

EventId DrainParser::learn(std::string_view content) {
    std::vector<std::string> tokens;
    for (auto& t : mask(content)) tokens.push_back(std::move(t.masked));

    if (Cluster* match = search(tokens)) {
        bool changed = false;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (match->tokens[i] != tokens[i] && match->tokens[i] != kWildcard) {
                match->tokens[i] = std::string(kWildcard);
                changed = true;
            }
        }
        if (changed) vocabulary_.set_tokens(match->id, match->tokens);
        return match->id;
    }

    auto cluster = std::make_unique<Cluster>();
    cluster->tokens = tokens;
    cluster->id = vocabulary_.add(std::move(tokens));
    insert(cluster.get());
    clusters_.push_back(std::move(cluster));
    return clusters_.back()->id;
}

std::vector<std::string> DrainParser::extract_params(std::string_view content, EventId id) const {
    const auto& templ = vocabulary_.at(id).tokens;
    auto tokens = mask(content);
    if (tokens.size() != templ.size()) {
        throw std::invalid_argument("message does not fit template " + std::to_string(id));
    }
    std::vector<std::string> params;
    for (std::size_t i = 0; i < templ.size(); ++i) {
        if (templ[i] == kWildcard) {
            params.push_back(tokens[i].raw);
        } else if (templ[i].find(kWildcard) != std::string::npos) {
            for (auto& c : tokens[i].captures) params.push_back(std::move(c));
        }
    }
    return params;
}

}  // namespace omlog
