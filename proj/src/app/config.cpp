#include "omlog/app/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "omlog/corpus/log_parser.hpp"
#include "omlog/errors.hpp"

namespace omlog::app {
namespace {

// Seeds are stored as uint64_t and share the size_t alternative.
static_assert(std::is_same_v<std::uint64_t, std::size_t>, "config table assumes a 64-bit size_t");
using Field = std::variant<std::size_t*, double*, std::string*>;

struct Key {
    const char* section;
    const char* name;
    Field field;
};

// Single table drives parsing, serialisation and JSON export.
std::vector<Key> keys(RunConfig& c) {
    return {
        {"dataset", "format", &c.format},
        {"dataset", "log_path", &c.log_path},
        {"dataset", "label_path", &c.label_path},
        {"dataset", "session_pattern", &c.session_pattern},
        {"dataset", "window_size", &c.window_size},
        {"dataset", "window_step", &c.window_step},
        {"dataset", "train_ratio", &c.train_ratio},
        {"parser", "depth", &c.drain_depth},
        {"parser", "similarity_threshold", &c.drain_similarity},
        {"parser", "max_children", &c.drain_max_children},
        {"features", "component_cap", &c.features.component_cap},
        {"features", "level_cap", &c.features.level_cap},
        {"features", "dt_clip_seconds", &c.features.dt_clip_seconds},
        {"model", "embed_dim", &c.embed_dim},
        {"model", "hidden", &c.hidden},
        {"model", "h", &c.window},
        {"model", "top_k", &c.top_k},
        {"model", "objective", &c.objective},
        {"normality", "subwindow", &c.normality_subwindow},
        {"normality", "hidden", &c.normality_hidden},
        {"normality", "code", &c.normality_code},
        {"normality", "threshold", &c.normality_threshold},
        {"normality", "learning_rate", &c.normality_lr},
        {"normality", "epochs", &c.normality_epochs},
        {"train", "learning_rate", &c.train.learning_rate},
        {"train", "epochs", &c.train.epochs},
        {"train", "eval_every", &c.train.eval_every},
        {"train", "batch_size", &c.train.batch_size},
        {"train", "validation_fraction", &c.validation_fraction},
        {"drift", "epsilon_divisor", &c.epsilon_divisor},
        {"drift", "epsilon_multiplier", &c.epsilon_multiplier},
        {"drift", "sigma_subsample", &c.sigma_subsample},
        {"drift", "sigma", &c.sigma},
        {"drift", "epsilon", &c.epsilon},
        {"meta", "tasks_per_batch", &c.episode.tasks_per_batch},
        {"meta", "support_size", &c.episode.support_size},
        {"meta", "inner_epochs", &c.episode.inner_epochs},
        {"meta", "inner_lr", &c.episode.inner_lr},
        {"online", "epochs", &c.online_epochs},
        {"online", "learning_rate", &c.online_lr},
        {"stream", "batch_size", &c.batch_size},
        {"stream", "mode", &c.mode},
        {"synthetic", "regimes", &c.synthetic.regimes},
        {"synthetic", "alphabet", &c.synthetic.alphabet},
        {"synthetic", "shared_events", &c.synthetic.shared_events},
        {"synthetic", "samples_per_regime", &c.synthetic.samples_per_regime},
        {"synthetic", "sample_length", &c.synthetic.sample_length},
        {"synthetic", "anomaly_rate", &c.synthetic.anomaly_rate},
        {"synthetic", "alien_fraction", &c.synthetic.alien_fraction},
        {"synthetic", "header_anomaly_prob", &c.synthetic.header_anomaly_prob},
        {"synthetic", "repeat_fraction", &c.synthetic.repeat_fraction},
        {"synthetic", "repeat_block", &c.synthetic.repeat_block},
        {"synthetic", "component_pool", &c.synthetic.component_pool},
        {"run", "seed", &c.seed},
        {"run", "out_dir", &c.out_dir},
    };
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("bad number '" + std::string(v) + "'");
    return out;
}

double parse_real(std::string_view v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    return parse_number<double>(v);
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format(const Field& f) {
    return std::visit(
        [](auto* p) -> std::string {
            using T = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return *p;
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(*p);
            } else {
                return std::to_string(*p);
            }
        },
        f);
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    for (auto& k : keys(cfg)) {
        if (section != k.section || key != k.name) continue;
        std::visit(
            [&](auto* p) {
                using T = std::remove_pointer_t<decltype(p)>;
                if constexpr (std::is_same_v<T, std::string>) {
                    *p = std::string(value);
                } else if constexpr (std::is_same_v<T, double>) {
                    *p = parse_real(value);
                } else {
                    *p = parse_number<T>(value);
                }
            },
            k.field);
        return;
    }
    throw ConfigError("unknown setting [" + std::string(section) + "] " + std::string(key));
}

RunConfig parse_run_config(std::string_view text, const std::string& origin) {
    RunConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto where = origin + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "setting outside a section");
        try {
            apply_setting(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.string());
}

std::string to_ini(const RunConfig& cfg) {
    auto copy = cfg;
    std::string out, section;
    for (const auto& k : keys(copy)) {
        if (section != k.section) {
            if (!section.empty()) out += '\n';
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += std::string(k.name) + " = " + format(k.field) + "\n";
    }
    return out;
}

nlohmann::json to_json(const RunConfig& cfg) {
    auto copy = cfg;
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : keys(copy)) {
        std::visit(
            [&](auto* p) {
                using T = std::remove_pointer_t<decltype(p)>;
                if constexpr (std::is_same_v<T, double>) {
                    j[k.section][k.name] = std::isfinite(*p) ? nlohmann::json(*p) : nlohmann::json(format_real(*p));
                } else {
                    j[k.section][k.name] = *p;
                }
            },
            k.field);
    }
    return j;
}

void validate(const RunConfig& c) {
    if (c.format != "synthetic") parse_dataset_format(c.format);
    parse_objective(c.objective);
    parse_stream_mode(c.mode);
    if (!(c.train_ratio > 0.0 && c.train_ratio < 1.0)) throw ConfigError("train_ratio must be in (0, 1)");
    if (c.window == 0 || c.top_k == 0 || c.hidden == 0 || c.embed_dim == 0) {
        throw ConfigError("model sizes must be positive");
    }
    if (!(c.train.learning_rate > 0.0)) throw ConfigError("[train] learning_rate must be positive");
    if (c.train.epochs == 0) throw ConfigError("[train] epochs must be positive");
    if (!(c.normality_threshold > 0.0)) throw ConfigError("[normality] threshold must be positive");
    if (c.batch_size == 0) throw ConfigError("[stream] batch_size must be positive");
    if (c.window_size == 0 || c.window_step == 0) throw ConfigError("window size and step must be positive");
    if (!(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0)) {
        throw ConfigError("validation_fraction must be in [0, 1)");
    }
    validate(c.episode);
}

DrainConfig drain_config(const RunConfig& cfg) {
    auto d = cfg.format == "synthetic" ? DrainConfig{} : default_drain_config(parse_dataset_format(cfg.format));
    d.depth = cfg.drain_depth;
    d.similarity_threshold = cfg.drain_similarity;
    d.max_children = cfg.drain_max_children;
    return d;
}

NextEventConfig next_event_config(const RunConfig& cfg, std::size_t vocab_size) {
    NextEventConfig m;
    m.vocab_size = std::max<std::size_t>(vocab_size, 1);
    m.embed_dim = cfg.embed_dim;
    m.hidden = cfg.hidden;
    m.window = cfg.window;
    m.top_k = cfg.top_k;
    m.objective = parse_objective(cfg.objective);
    m.seed = cfg.seed;
    return m;
}

NormalityConfig normality_config(const RunConfig& cfg) {
    NormalityConfig n;
    n.features = cfg.features;
    n.subwindow = cfg.normality_subwindow;
    n.hidden = cfg.normality_hidden;
    n.code = cfg.normality_code;
    n.threshold = cfg.normality_threshold;
    n.seed = cfg.seed + 1;
    return n;
}

StreamConfig stream_config(const RunConfig& cfg) {
    StreamConfig s;
    s.batch_size = cfg.batch_size;
    s.mode = parse_stream_mode(cfg.mode);
    s.seed = cfg.seed;
    s.episode = cfg.episode;
    s.online_epochs = cfg.online_epochs;
    s.online_lr = cfg.online_lr;
    s.calibration.sigma_subsample = cfg.sigma_subsample;
    s.calibration.epsilon_divisor = cfg.epsilon_divisor;
    s.epsilon_multiplier = cfg.epsilon_multiplier;
    if (cfg.sigma > 0.0) s.sigma = cfg.sigma;
    if (cfg.epsilon >= 0.0) s.epsilon = cfg.epsilon;
    return s;
}

TrainOptions next_event_train_options(const RunConfig& cfg) {
    TrainOptions o;
    o.sgd = cfg.train;
    o.seed = cfg.seed;
    return o;
}

TrainOptions normality_train_options(const RunConfig& cfg) {
    TrainOptions o;
    o.sgd = cfg.train;
    o.sgd.learning_rate = cfg.normality_lr;
    o.sgd.epochs = cfg.normality_epochs;
    o.sgd.eval_every = std::min(cfg.train.eval_every, cfg.normality_epochs);
    o.seed = cfg.seed + 1;
    return o;
}

}  // namespace omlog::app
