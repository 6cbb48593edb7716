// omlog command-line entry point: parse | synth | train | stream | sweep | analyze.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omlog/analysis/similarity.hpp"
#include "omlog/app/config.hpp"
#include "omlog/app/datasets.hpp"
#include "omlog/app/synthetic.hpp"
#include "omlog/app/workflow.hpp"
#include "omlog/corpus/corpus_io.hpp"
#include "omlog/corpus/grouping.hpp"
#include "omlog/errors.hpp"
#include "omlog/pipeline/stream.hpp"

namespace fs = std::filesystem;
using namespace omlog;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNumeric = 4 };

struct Options {
    std::string config_path;
    std::vector<std::string> settings;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string samples;
    std::string model_dir;
    std::optional<double> train_ratio;
    std::optional<std::size_t> batch_size;
    std::string mode;
    // parse
    std::string dataset;
    std::string input;
    std::string labels;
    // sweep
    std::string epsilon_grid = "0.5,1,2";
    std::string tasks_grid = "2,10";
    // analyze
    double threshold = 0.001;
    std::size_t pair_cap = 2000;
    bool frequencies = true;
};

app::RunConfig build_config(const Options& o) {
    auto cfg = o.config_path.empty() ? app::RunConfig{} : app::load_run_config(o.config_path);
    for (const auto& s : o.settings) {
        const auto dot = s.find('.');
        const auto eq = s.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
            throw ConfigError("--set expects section.key=value, got '" + s + "'");
        }
        app::apply_setting(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.train_ratio) cfg.train_ratio = *o.train_ratio;
    if (o.batch_size) cfg.batch_size = *o.batch_size;
    if (!o.mode.empty()) cfg.mode = o.mode;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (const char* env = std::getenv("OMLOG_OUT_DIR"); env && *env) cfg.out_dir = env;
    app::validate(cfg);
    return cfg;
}

app::Dataset samples_for(const Options& o, const app::RunConfig& cfg) {
    if (!o.samples.empty()) return app::read_sample_set(o.samples);
    return app::load_dataset(cfg);
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in grid");
        }
    }
    if (out.empty()) throw ConfigError("empty grid");
    return out;
}

std::vector<std::size_t> parse_count_list(const std::string& s) {
    std::vector<std::size_t> out;
    for (double v : parse_real_list(s)) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ConfigError("task counts must be positive integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

int cmd_parse(const Options& o) {
    auto cfg = build_config(o);
    if (!o.dataset.empty()) cfg.format = o.dataset;
    if (!o.input.empty()) cfg.log_path = o.input;
    if (!o.labels.empty()) cfg.label_path = o.labels;
    app::validate(cfg);
    if (cfg.format == "synthetic") throw ConfigError("parse needs --dataset hdfs|bgl|generic");
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);

    std::ofstream records(out / "parsed.tsv");
    if (!records) throw Error("cannot write " + (out / "parsed.tsv").string());
    ParsedRecordWriter writer(records);
    auto data = app::load_dataset(cfg, [&](const ParsedRecord& r, const LogParser& p) {
        writer.write(r, p.components(), p.levels());
    });
    {
        std::ofstream catalog(out / "templates.tsv");
        catalog << "event_id\ttemplate\n";
        for (std::size_t i = 0; i < data.templates.size(); ++i) catalog << i << '\t' << data.templates[i] << '\n';
    }
    app::write_sample_set(out / "samples.json", data);
    const nlohmann::json summary = {{"lines", data.parse_stats.lines},
                                    {"parsed", data.parse_stats.parsed},
                                    {"quarantined", data.parse_stats.quarantined},
                                    {"timestamp_regressions", data.parse_stats.timestamp_regressions},
                                    {"templates", data.vocab_size},
                                    {"samples", data.samples.size()},
                                    {"abnormal", data.abnormal_count()},
                                    {"unlabeled", data.unlabeled},
                                    {"dropped_records", data.dropped_records}};
    app::write_json(out / "parse_summary.json", summary);
    app::write_manifest(out, "parse", cfg, {{"summary", summary}});
    std::cout << "parsed " << data.parse_stats.parsed << " lines into " << data.vocab_size << " templates, "
              << data.samples.size() << " samples (" << data.abnormal_count() << " abnormal)\n";
    return kOk;
}

int cmd_synth(const Options& o) {
    auto cfg = build_config(o);
    cfg.format = "synthetic";
    const auto spec = app::make_synthetic_spec(cfg.synthetic, cfg.seed);
    const auto stream = app::synthesize(spec);
    app::Dataset d;
    d.samples = stream.samples;
    d.vocab_size = stream.vocab_size;
    d.shift_points = stream.shift_points;
    const fs::path out = cfg.out_dir;
    app::write_sample_set(out / "samples.json", d);
    std::size_t repeats = 0;
    for (bool r : stream.repeat_block) repeats += r;
    const nlohmann::json summary = {{"samples", d.samples.size()},
                                    {"abnormal", d.abnormal_count()},
                                    {"vocab_size", d.vocab_size},
                                    {"shift_points", stream.shift_points},
                                    {"shift_batches", stream.shift_batches(cfg.batch_size)},
                                    {"blocks", stream.repeat_block.size()},
                                    {"repeat_blocks", repeats}};
    app::write_json(out / "synth_summary.json", summary);
    app::write_manifest(out, "synth", cfg, {{"summary", summary}});
    std::cout << "synthesized " << d.samples.size() << " samples, " << d.abnormal_count() << " abnormal, "
              << stream.shift_points.size() << " shift points\n";
    return kOk;
}

int cmd_train(const Options& o) {
    const auto cfg = build_config(o);
    const auto data = samples_for(o, cfg);
    const auto split = split_train_test(data.samples, cfg.train_ratio);
    const fs::path out = cfg.out_dir;
    fs::create_directories(out);
    const auto models = app::train_models(cfg, split.train, data.vocab_size, out);
    const nlohmann::json log = {{"train_samples", split.train.size()},
                                {"test_samples", split.test.size()},
                                {"discarded_abnormal", split.discarded_abnormal},
                                {"train_minutes", models.seconds / 60.0},
                                {"next_event", app::to_json(models.detector_log)},
                                {"normality", app::to_json(models.normality_log)}};
    app::write_json(out / "training.json", log);
    app::write_manifest(out, "train", cfg, {{"samples", o.samples}});
    std::cout << "trained on " << split.train.size() << " normal samples in " << models.seconds << " s; best epoch "
              << models.detector_log.best_epoch << " (loss " << models.detector_log.best_loss << ")\n";
    return kOk;
}

struct StreamInputs {
    app::RunConfig cfg;
    app::Dataset data;
    TrainTestSplit split;
    app::TrainedModels models;
};

StreamInputs stream_inputs(const Options& o) {
    StreamInputs in;
    in.cfg = build_config(o);
    const fs::path model_dir = o.model_dir.empty() ? fs::path(in.cfg.out_dir) : fs::path(o.model_dir);
    in.models = app::load_models(model_dir);
    in.models.detector.set_top_k(in.cfg.top_k);
    in.models.detector.set_objective(parse_objective(in.cfg.objective));
    in.models.normality.set_threshold(in.cfg.normality_threshold);
    if (fs::exists(model_dir / "training.json")) {
        std::ifstream is(model_dir / "training.json");
        const auto j = nlohmann::json::parse(is, nullptr, false);
        if (!j.is_discarded()) in.models.seconds = j.value("train_minutes", 0.0) * 60.0;
    }
    in.data = samples_for(o, in.cfg);
    in.split = split_train_test(in.data.samples, in.cfg.train_ratio);
    return in;
}

int cmd_stream(const Options& o) {
    auto in = stream_inputs(o);
    auto report = run_stream(in.models.detector, in.models.normality, in.split.train, in.split.test,
                             app::stream_config(in.cfg));
    report.train_seconds = in.models.seconds;
    report.config = {{"stream", report.config}, {"run", app::to_json(in.cfg)}};
    const fs::path out = in.cfg.out_dir;
    app::write_json(out / "report.json", to_json(report));
    write_batch_csv(out / "batches.csv", report);
    write_verdict_csv(out / "verdicts.csv", report);
    app::write_manifest(out, "stream", in.cfg, {{"samples", o.samples}, {"model_dir", o.model_dir}});
    std::cout << to_string(report.mode) << ": F1 " << report.metrics.f1 << " (P " << report.metrics.precision
              << ", R " << report.metrics.recall << "), " << report.online_routes << "/" << report.batches.size()
              << " batches online, " << report.update_steps << " update steps, " << report.test_seconds << " s\n";
    return kOk;
}

int cmd_sweep(const Options& o) {
    auto in = stream_inputs(o);
    const auto eps = parse_real_list(o.epsilon_grid);
    const auto tasks = parse_count_list(o.tasks_grid);
    auto base = app::stream_config(in.cfg);
    const auto points = sweep(in.models.detector, in.models.normality, in.split.train, in.split.test, base, eps, tasks);
    const fs::path out = in.cfg.out_dir;
    for (const auto& p : points) {
        std::ostringstream name;
        name << "eps_" << p.epsilon_multiplier << "_T_" << p.tasks_per_batch;
        auto r = p.report;
        r.train_seconds = in.models.seconds;
        app::write_json(out / "sweep" / name.str() / "report.json", to_json(r));
        write_batch_csv(out / "sweep" / name.str() / "batches.csv", r);
    }
    write_sweep_csv(out / "sweep.csv", points);
    app::write_manifest(out, "sweep", in.cfg,
                        {{"epsilon_grid", o.epsilon_grid}, {"tasks_grid", o.tasks_grid}, {"samples", o.samples}});
    std::cout << "sweep: " << points.size() << " runs\n";
    for (const auto& p : points) {
        std::cout << "  eps x" << p.epsilon_multiplier << " T=" << p.tasks_per_batch << ": F1 " << p.report.metrics.f1
                  << ", " << p.report.test_seconds << " s\n";
    }
    return kOk;
}

int cmd_analyze(const Options& o) {
    const auto cfg = build_config(o);
    const auto data = samples_for(o, cfg);
    const auto batches = make_batches(data.samples, cfg.batch_size);
    SimilarityConfig sim;
    sim.seed = cfg.seed;
    sim.pair_cap = o.pair_cap;
    const auto similarity = similarity_report(batches, sim);
    const fs::path out = cfg.out_dir;
    write_similarity_csv(out / "similarity.csv", similarity);
    nlohmann::json summary = {{"batches", batches.size()},
                              {"mean_internal_distance", similarity.mean_internal},
                              {"mean_external_distance", similarity.mean_external}};
    if (batches.size() >= 2) {
        const auto census = shift_census(batches, data.vocab_size, o.threshold, cfg.sigma, cfg.seed);
        write_census_csv(out / "census.csv", census);
        summary["census"] = {{"threshold", census.threshold},
                             {"sigma", census.sigma},
                             {"pairs", census.mmd.size()},
                             {"below_threshold", census.below_threshold},
                             {"identical", census.identical},
                             {"stable_fraction", census.stable_fraction()}};
    }
    if (o.frequencies) write_frequency_csv(out / "frequencies.csv", data.samples, data.vocab_size);
    app::write_json(out / "analysis.json", summary);
    app::write_manifest(out, "analyze", cfg, {{"threshold", o.threshold}, {"samples", o.samples}});
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"omlog: online log anomaly detection with drift routing and meta-learning"};
    cli.require_subcommand(1);
    Options o;
    cli.add_option("-c,--config", o.config_path, "Run config file (sectioned key = value)")->check(CLI::ExistingFile);
    cli.add_option("--set", o.settings, "Override one setting: section.key=value");
    cli.add_option("-o,--out", o.out, "Output directory (OMLOG_OUT_DIR takes precedence)");
    cli.add_option("--seed", o.seed, "Random seed");

    auto* parse = cli.add_subcommand("parse", "Parse a raw log into records, templates and samples");
    parse->add_option("--dataset", o.dataset, "hdfs | bgl | generic")->required();
    parse->add_option("--input", o.input, "Raw log file")->required()->check(CLI::ExistingFile);
    parse->add_option("--labels", o.labels, "HDFS anomaly label file")->check(CLI::ExistingFile);

    auto* synth = cli.add_subcommand("synth", "Generate a synthetic regime-shift stream");

    auto* train = cli.add_subcommand("train", "Train the next-event and normality models");
    auto* stream = cli.add_subcommand("stream", "Replay the test stream through a detection mode");
    auto* sweep_cmd = cli.add_subcommand("sweep", "Grid over epsilon multipliers and meta-task counts");
    auto* analyze = cli.add_subcommand("analyze", "DTW similarity and MMD shift census of a sample stream");

    for (auto* sub : {train, stream, sweep_cmd, analyze}) {
        sub->add_option("--samples", o.samples, "Sample-set JSON (default: load the configured dataset)")
            ->check(CLI::ExistingFile);
    }
    for (auto* sub : {train, stream, sweep_cmd}) {
        sub->add_option("--train-ratio", o.train_ratio, "Chronological training fraction");
    }
    for (auto* sub : {stream, sweep_cmd, analyze, synth}) {
        sub->add_option("--batch-size", o.batch_size, "Samples per batch (B)");
    }
    for (auto* sub : {stream, sweep_cmd}) {
        sub->add_option("--model-dir", o.model_dir, "Directory holding the trained checkpoints (default: --out)");
        sub->add_option("--mode", o.mode, "offline | online | online-dsd | meta | omlog");
    }
    sweep_cmd->add_option("--epsilon-grid", o.epsilon_grid, "Comma-separated epsilon multipliers");
    sweep_cmd->add_option("--tasks-grid", o.tasks_grid, "Comma-separated meta-task counts");
    analyze->add_option("--threshold", o.threshold, "MMD threshold for the shift census");
    analyze->add_option("--pair-cap", o.pair_cap, "Max DTW pairs per value");
    analyze->add_flag("!--no-frequencies", o.frequencies, "Skip the frequency-vector CSV");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (parse->parsed()) return cmd_parse(o);
        if (synth->parsed()) return cmd_synth(o);
        if (train->parsed()) return cmd_train(o);
        if (stream->parsed()) return cmd_stream(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (analyze->parsed()) return cmd_analyze(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
