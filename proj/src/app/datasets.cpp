#include "omlog/app/datasets.hpp"

#include <algorithm>
#include <fstream>

#include "omlog/app/synthetic.hpp"
#include "omlog/errors.hpp"

namespace omlog::app {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

void finish(Dataset& d, LogParser& parser) {
    d.parse_stats = parser.stats();
    d.vocab_size = parser.vocabulary().size();
    for (const auto& ev : parser.vocabulary().events()) d.templates.push_back(ev.text());
    if (d.samples.empty()) throw DataError("dataset produced zero samples");
}

Dataset load_windows(const std::filesystem::path& log, DatasetFormat format, const DrainConfig& drain,
                     WindowSpec windows, const RecordTap& tap) {
    Dataset d;
    LogParser parser(format, drain);
    SlidingWindower w(windows);
    parse_log_file(log, parser, [&](const ParsedRecord& r) {
        if (tap) tap(r, parser);
        w.add(r);
    });
    d.samples = w.finish();
    if (format == DatasetFormat::Generic) {
        for (auto& s : d.samples) s.label.reset();
        d.unlabeled = d.samples.size();
    }
    finish(d, parser);
    return d;
}

}  // namespace

std::size_t Dataset::abnormal_count() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return s.is_abnormal(); }));
}

std::unordered_map<std::string, Label> read_block_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open label file " + path.string());
    std::unordered_map<std::string, Label> labels;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto comma = t.find(',');
        if (comma == std::string_view::npos) {
            throw DataError(path.string() + ":" + std::to_string(n) + ": expected BlockId,Label");
        }
        const auto key = trim(t.substr(0, comma));
        const auto value = trim(t.substr(comma + 1));
        if (n == 1 && key == "BlockId") continue;
        Label label;
        if (value == "Normal") {
            label = Label::Normal;
        } else if (value == "Anomaly") {
            label = Label::Abnormal;
        } else {
            throw DataError(path.string() + ":" + std::to_string(n) + ": unknown label '" + std::string(value) + "'");
        }
        labels[std::string(key)] = label;
    }
    if (labels.empty()) throw DataError("label file " + path.string() + " has no rows");
    return labels;
}

Dataset load_hdfs(const std::filesystem::path& log, const std::filesystem::path& label_path, const DrainConfig& drain,
                  const std::string& session_pattern, const RecordTap& tap) {
    const auto labels = read_block_labels(label_path);
    Dataset d;
    LogParser parser(DatasetFormat::Hdfs, drain);
    Sessionizer sessions(session_pattern);
    parse_log_file(log, parser, [&](const ParsedRecord& r) {
        if (tap) tap(r, parser);
        sessions.add(r);
    });
    d.samples = sessions.finish();
    d.dropped_records = sessions.dropped();
    const auto& keys = sessions.keys();
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        const auto it = labels.find(keys[i]);
        if (it == labels.end()) {
            ++d.unlabeled;
        } else {
            d.samples[i].label = it->second;
        }
    }
    finish(d, parser);
    return d;
}

Dataset load_bgl(const std::filesystem::path& log, const DrainConfig& drain, WindowSpec windows,
                 const RecordTap& tap) {
    return load_windows(log, DatasetFormat::Bgl, drain, windows, tap);
}

Dataset load_generic(const std::filesystem::path& log, const DrainConfig& drain, WindowSpec windows,
                     const RecordTap& tap) {
    return load_windows(log, DatasetFormat::Generic, drain, windows, tap);
}

Dataset load_dataset(const RunConfig& cfg, const RecordTap& tap) {
    if (cfg.format == "synthetic") {
        const auto stream = synthesize(make_synthetic_spec(cfg.synthetic, cfg.seed));
        Dataset d;
        d.samples = stream.samples;
        d.vocab_size = stream.vocab_size;
        d.shift_points = stream.shift_points;
        if (d.samples.empty()) throw DataError("synthetic stream is empty");
        return d;
    }
    const auto format = parse_dataset_format(cfg.format);
    if (cfg.log_path.empty()) throw ConfigError("[dataset] log_path is required for " + cfg.format);
    const WindowSpec windows{cfg.window_size, cfg.window_step};
    switch (format) {
        case DatasetFormat::Hdfs:
            if (cfg.label_path.empty()) throw ConfigError("[dataset] label_path is required for hdfs");
            return load_hdfs(cfg.log_path, cfg.label_path, drain_config(cfg), cfg.session_pattern, tap);
        case DatasetFormat::Bgl: return load_bgl(cfg.log_path, drain_config(cfg), windows, tap);
        case DatasetFormat::Generic: return load_generic(cfg.log_path, drain_config(cfg), windows, tap);
    }
    throw ConfigError("unsupported dataset format");
}

void write_sample_set(const std::filesystem::path& path, const Dataset& d) {
    nlohmann::json j;
    j["vocab_size"] = d.vocab_size;
    j["templates"] = d.templates;
    j["shift_points"] = d.shift_points;
    auto& arr = j["samples"] = nlohmann::json::array();
    for (const auto& s : d.samples) {
        nlohmann::json headers = nlohmann::json::array();
        for (const auto& h : s.headers) headers.push_back({h.timestamp, h.component, h.level});
        nlohmann::json label = nullptr;
        if (s.label) label = s.is_abnormal() ? "abnormal" : "normal";
        arr.push_back({{"events", s.events},
                       {"headers", std::move(headers)},
                       {"label", std::move(label)},
                       {"origin", {s.origin.source, s.origin.start_line, s.origin.window_index}}});
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << j.dump() << '\n';
}

Dataset read_sample_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sample set " + path.string());
    Dataset d;
    try {
        const auto j = nlohmann::json::parse(in);
        d.vocab_size = j.at("vocab_size").get<std::size_t>();
        d.templates = j.value("templates", std::vector<std::string>{});
        d.shift_points = j.value("shift_points", std::vector<std::size_t>{});
        for (const auto& js : j.at("samples")) {
            Sample s;
            s.events = js.at("events").get<std::vector<EventId>>();
            for (const auto& h : js.at("headers")) {
                s.headers.push_back(LogHeader{h.at(0).get<std::int64_t>(), h.at(1).get<std::uint32_t>(),
                                              h.at(2).get<std::uint32_t>()});
            }
            const auto& label = js.at("label");
            if (!label.is_null()) {
                const auto v = label.get<std::string>();
                if (v != "normal" && v != "abnormal") throw DataError("unknown label '" + v + "'");
                s.label = v == "abnormal" ? Label::Abnormal : Label::Normal;
            }
            const auto& o = js.at("origin");
            s.origin = SampleOrigin{o.at(0).get<std::uint32_t>(), o.at(1).get<std::size_t>(), o.at(2).get<std::size_t>()};
            validate(s);
            for (auto e : s.events) {
                if (e >= d.vocab_size) throw DataError("event id " + std::to_string(e) + " exceeds vocab_size");
            }
            d.samples.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (d.samples.empty()) throw DataError(path.string() + " holds zero samples");
    return d;
}

}  // namespace omlog::app
