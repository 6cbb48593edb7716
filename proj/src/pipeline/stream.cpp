#include "omlog/pipeline/stream.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "omlog/detectors/training.hpp"
#include "omlog/errors.hpp"
#include "omlog/features/features.hpp"

namespace omlog {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool uses_dsd(StreamMode m) { return m == StreamMode::OnlineDsd || m == StreamMode::OMLog; }

std::vector<std::span<const Sample>> split_batches(std::span<const Sample> s, std::size_t b) {
    std::vector<std::span<const Sample>> out;
    for (std::size_t i = 0; i < s.size(); i += b) out.push_back(s.subspan(i, std::min(b, s.size() - i)));
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    return os;
}

nlohmann::json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

StreamMode parse_stream_mode(std::string_view s) {
    if (s == "offline") return StreamMode::Offline;
    if (s == "online") return StreamMode::Online;
    if (s == "online-dsd") return StreamMode::OnlineDsd;
    if (s == "meta") return StreamMode::MetaOnly;
    if (s == "omlog") return StreamMode::OMLog;
    throw ConfigError("unknown stream mode '" + std::string(s) + "'");
}

std::string_view to_string(StreamMode m) {
    switch (m) {
        case StreamMode::Offline: return "offline";
        case StreamMode::Online: return "online";
        case StreamMode::OnlineDsd: return "online-dsd";
        case StreamMode::MetaOnly: return "meta";
        case StreamMode::OMLog: return "omlog";
    }
    return "?";
}

void validate(const StreamConfig& cfg) {
    if (cfg.batch_size == 0) throw ConfigError("batch size must be at least 1");
    validate(cfg.episode);
    if (cfg.online_lr < 0.0) throw ConfigError("online learning rate must be non-negative");
    if (!(cfg.epsilon_multiplier >= 0.0)) throw ConfigError("epsilon multiplier must be non-negative");
    if (cfg.sigma && !(*cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (cfg.epsilon && !(*cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
}

nlohmann::json to_json(const StreamConfig& cfg) {
    nlohmann::json j = {{"batch_size", cfg.batch_size},
                        {"mode", std::string(to_string(cfg.mode))},
                        {"seed", cfg.seed},
                        {"tasks_per_batch", cfg.episode.tasks_per_batch},
                        {"support_size", cfg.episode.support_size},
                        {"inner_epochs", cfg.episode.inner_epochs},
                        {"inner_lr", cfg.episode.inner_lr},
                        {"online_epochs", cfg.online_epochs},
                        {"online_lr", cfg.online_lr},
                        {"sigma_subsample", cfg.calibration.sigma_subsample},
                        {"epsilon_divisor", cfg.calibration.epsilon_divisor},
                        {"epsilon_multiplier", finite_or_string(cfg.epsilon_multiplier)}};
    j["sigma"] = cfg.sigma ? finite_or_string(*cfg.sigma) : nlohmann::json(nullptr);
    j["epsilon"] = cfg.epsilon ? finite_or_string(*cfg.epsilon) : nlohmann::json(nullptr);
    return j;
}

MmdConfig calibrate_stream(std::span<const Sample> train, std::size_t vocab_size, const StreamConfig& cfg) {
    MmdConfig mmd;
    if (!cfg.sigma || !cfg.epsilon) {
        std::vector<DistributionSnapshot> snaps;
        for (auto b : split_batches(train, cfg.batch_size)) snaps.push_back(DistributionSnapshot::from_samples(b, vocab_size));
        if (snaps.size() < 2) {
            throw ConfigError("DSD calibration needs at least two training batches of " +
                              std::to_string(cfg.batch_size) + " samples");
        }
        auto opts = cfg.calibration;
        opts.seed = cfg.seed;
        if (cfg.sigma) {
            // epsilon still needs calibrating, under the given sigma
            double sum = 0.0;
            for (std::size_t i = 1; i < snaps.size(); ++i) sum += mmd_value(snaps[i - 1], snaps[i], *cfg.sigma);
            mmd.sigma = *cfg.sigma;
            mmd.epsilon = sum / static_cast<double>(snaps.size() - 1) / opts.epsilon_divisor;
        } else {
            mmd = calibrate(snaps, opts);
        }
    }
    if (cfg.sigma) mmd.sigma = *cfg.sigma;
    if (cfg.epsilon) {
        mmd.epsilon = *cfg.epsilon;
    } else {
        // inf * 0 stays 0 only if we special-case it
        mmd.epsilon = std::isinf(cfg.epsilon_multiplier) ? std::numeric_limits<double>::infinity()
                                                         : mmd.epsilon * cfg.epsilon_multiplier;
    }
    return mmd;
}

RunReport run_stream(NextEventModel& model, const NormalityModel& normality, std::span<const Sample> train,
                     std::span<const Sample> test, const StreamConfig& cfg) {
    validate(cfg);
    if (test.empty()) throw DataError("empty test stream");
    RunReport report;
    report.mode = cfg.mode;
    report.config = to_json(cfg);

    const auto t_start = Clock::now();
    KnownEvents known;
    known.add(train);
    std::optional<DistributionSnapshot> prev;
    if (uses_dsd(cfg.mode)) {
        const auto vocab = std::max(model.vocab_size(), required_vocab(train));
        report.mmd = calibrate_stream(train, vocab, cfg);
        const auto tail = train.size() > cfg.batch_size ? train.subspan(train.size() - cfg.batch_size) : train;
        if (!tail.empty()) prev = DistributionSnapshot::from_samples(tail, vocab);
    }

    const auto batches = split_batches(test, cfg.batch_size);
    double meta_loss_sum = 0.0;
    std::size_t meta_batches = 0;
    for (std::size_t k = 0; k < batches.size(); ++k) {
        const auto t0 = Clock::now();
        const auto batch = batches[k];
        BatchRecord rec;
        rec.index = k;
        rec.begin = static_cast<std::size_t>(batch.data() - test.data());
        rec.size = batch.size();

        const auto vocab = std::max(model.vocab_size(), required_vocab(batch));
        bool online = cfg.mode == StreamMode::Online || cfg.mode == StreamMode::MetaOnly;
        if (uses_dsd(cfg.mode)) {
            auto cur = DistributionSnapshot::from_samples(batch, vocab);
            const auto d = prev ? decide(*prev, cur, known, report.mmd)
                                : RouteDecision{Route::Online, 0.0, false};
            rec.mmd = d.mmd;
            rec.new_events = d.new_events;
            online = d.route == Route::Online;
            prev = std::move(cur);
        }
        rec.route = online ? Route::Online : Route::Offline;
        known.add(batch);

        std::vector<DetectionVerdict> verdicts;
        const bool meta = cfg.mode == StreamMode::MetaOnly || cfg.mode == StreamMode::OMLog;
        if (online && meta) {
            auto r = detect_batch(model, batch, normality, cfg.episode);
            verdicts = std::move(r.verdicts);
            rec.filtered_normals = r.filtered_normals;
            rec.update_steps = r.update_steps;
            rec.meta_loss = r.meta_loss;
            rec.tasks = std::move(r.tasks);
            meta_loss_sum += r.meta_loss;
            ++meta_batches;
        } else {
            model.grow_classes(vocab);
            if (online) {
                const auto normals = normality_filter(normality, batch);
                rec.filtered_normals = normals.size();
                std::vector<NextEventPair> pairs;
                append_next_event_pairs(normals, model.window(), pairs);
                rec.update_steps = fine_tune(model, pairs, cfg.online_lr, cfg.online_epochs);
            }
            for (const auto& s : batch) verdicts.push_back(model.score_sample(s));
        }

        rec.metrics = evaluate(verdicts, batch);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (verdicts[i].too_short) ++report.too_short;
            report.verdicts.push_back({k, batch[i].origin, batch[i].label, verdicts[i]});
        }
        if (online) ++report.online_routes;
        report.update_steps += rec.update_steps;
        rec.seconds = seconds_since(t0);
        report.batches.push_back(std::move(rec));
    }
    report.test_seconds = seconds_since(t_start);
    report.meta_loss_cumulative = meta_batches ? meta_loss_sum / static_cast<double>(meta_batches) : 0.0;

    std::vector<DetectionVerdict> all;
    all.reserve(report.verdicts.size());
    for (const auto& v : report.verdicts) all.push_back(v.verdict);
    report.metrics = evaluate(all, test);
    return report;
}

nlohmann::json to_json(const RunReport& r, bool include_timings) {
    nlohmann::json j;
    j["mode"] = std::string(to_string(r.mode));
    j["config"] = r.config;
    j["sigma"] = finite_or_string(r.mmd.sigma);
    j["epsilon"] = finite_or_string(r.mmd.epsilon);
    j["metrics"] = to_json(r.metrics);
    j["update_steps"] = r.update_steps;
    j["online_routes"] = r.online_routes;
    j["batch_count"] = r.batches.size();
    j["sample_count"] = r.verdicts.size();
    j["too_short"] = r.too_short;
    j["meta_loss_cumulative"] = r.meta_loss_cumulative;
    if (include_timings) {
        j["train_minutes"] = r.train_seconds / 60.0;
        j["test_seconds"] = r.test_seconds;
    }
    auto& batches = j["batches"] = nlohmann::json::array();
    for (const auto& b : r.batches) {
        nlohmann::json jb = {{"index", b.index},
                             {"begin", b.begin},
                             {"size", b.size},
                             {"route", std::string(to_string(b.route))},
                             {"mmd", b.mmd},
                             {"new_events", b.new_events},
                             {"filtered_normals", b.filtered_normals},
                             {"update_steps", b.update_steps},
                             {"meta_loss", b.meta_loss},
                             {"metrics", to_json(b.metrics)}};
        auto& tasks = jb["tasks"] = nlohmann::json::array();
        for (const auto& t : b.tasks) {
            nlohmann::json jt = {{"index", t.index},
                                 {"query_size", t.query_size},
                                 {"support_size", t.support_size},
                                 {"loss", t.loss},
                                 {"update_steps", t.update_steps},
                                 {"aborted", t.aborted}};
            if (include_timings) jt["seconds"] = t.seconds;
            tasks.push_back(std::move(jt));
        }
        if (include_timings) jb["seconds"] = b.seconds;
        batches.push_back(std::move(jb));
    }
    return j;
}

void write_batch_csv(const std::filesystem::path& path, const RunReport& r, bool include_timings) {
    auto os = open_out(path);
    os << "batch,begin,size,route,mmd,epsilon,new_events,filtered_normals,tasks,support_sizes,task_losses,update_steps,"
          "meta_loss,tp,fp,tn,fn"
       << (include_timings ? ",seconds" : "") << '\n';
    os.precision(17);
    for (const auto& b : r.batches) {
        std::string sizes, losses;
        for (const auto& t : b.tasks) {
            if (!sizes.empty()) {
                sizes += ';';
                losses += ';';
            }
            sizes += std::to_string(t.support_size);
            std::ostringstream l;
            l.precision(10);
            l << t.loss;
            losses += l.str();
        }
        os << b.index << ',' << b.begin << ',' << b.size << ',' << to_string(b.route) << ',' << b.mmd << ','
           << r.mmd.epsilon << ',' << (b.new_events ? 1 : 0) << ',' << b.filtered_normals << ',' << b.tasks.size() << ',' << sizes << ','
           << losses << ',' << b.update_steps << ',' << b.meta_loss << ',' << b.metrics.tp << ',' << b.metrics.fp
           << ',' << b.metrics.tn << ',' << b.metrics.fn;
        if (include_timings) os << ',' << b.seconds;
        os << '\n';
    }
}

void write_verdict_csv(const std::filesystem::path& path, const RunReport& r) {
    auto os = open_out(path);
    os << "batch,source,start_line,window_index,label,anomalous,offending_window,score,too_short\n";
    for (const auto& v : r.verdicts) {
        os << v.batch << ',' << v.origin.source << ',' << v.origin.start_line << ',' << v.origin.window_index << ','
           << (v.label ? (*v.label == Label::Abnormal ? "abnormal" : "normal") : "") << ','
           << (v.verdict.anomalous ? 1 : 0) << ','
           << (v.verdict.offending_window ? std::to_string(*v.verdict.offending_window) : std::string()) << ','
           << v.verdict.score << ',' << (v.verdict.too_short ? 1 : 0) << '\n';
    }
}

std::vector<SweepPoint> sweep(const NextEventModel& initial, const NormalityModel& normality,
                              std::span<const Sample> train, std::span<const Sample> test, const StreamConfig& base,
                              std::span<const double> epsilon_multipliers, std::span<const std::size_t> tasks) {
    std::vector<SweepPoint> out;
    for (double eps : epsilon_multipliers) {
        for (auto t : tasks) {
            auto cfg = base;
            cfg.epsilon_multiplier = eps;
            cfg.episode.tasks_per_batch = t;
            auto model = initial;
            out.push_back({eps, t, run_stream(model, normality, train, test, cfg)});
        }
    }
    return out;
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> points) {
    auto os = open_out(path);
    os << "epsilon_multiplier,tasks_per_batch,epsilon,f1,precision,recall,online_routes,update_steps,test_seconds\n";
    os.precision(10);
    for (const auto& p : points) {
        os << p.epsilon_multiplier << ',' << p.tasks_per_batch << ',' << p.report.mmd.epsilon << ','
           << p.report.metrics.f1 << ',' << p.report.metrics.precision << ',' << p.report.metrics.recall << ','
           << p.report.online_routes << ',' << p.report.update_steps << ',' << p.report.test_seconds << '\n';
    }
}

}  // namespace omlog
