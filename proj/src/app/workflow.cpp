#include "omlog/app/workflow.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "omlog/errors.hpp"
#include "omlog/features/features.hpp"
#include "omlog/neural/checkpoint.hpp"

namespace omlog::app {

TrainedModels train_models(const RunConfig& cfg, std::span<const Sample> train, std::size_t vocab_size,
                           const std::filesystem::path& checkpoint_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    if (train.empty()) throw DataError("no normal training samples");
    const auto held = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(train.size())));
    const auto fit = train.first(train.size() - held);
    const auto val = train.last(held);

    std::vector<NextEventPair> pairs, val_pairs;
    append_next_event_pairs(fit, cfg.window, pairs);
    append_next_event_pairs(val, cfg.window, val_pairs);
    if (pairs.empty()) throw DataError("training samples are all shorter than h + 1 events");

    TrainedModels m{NextEventModel(next_event_config(cfg, vocab_size)), NormalityModel(normality_config(cfg)), {}, {}, 0.0};
    auto opts = next_event_train_options(cfg);
    if (!checkpoint_dir.empty()) opts.checkpoint_path = checkpoint_dir / "next_event.ckpt";
    m.detector_log = train_initial(m.detector, pairs, opts, val_pairs);

    std::vector<HeaderFeatureVector> windows, val_windows;
    for (const auto& s : fit) {
        auto w = m.normality.windows(s);
        windows.insert(windows.end(), w.begin(), w.end());
    }
    for (const auto& s : val) {
        auto w = m.normality.windows(s);
        val_windows.insert(val_windows.end(), w.begin(), w.end());
    }
    auto nopts = normality_train_options(cfg);
    if (!checkpoint_dir.empty()) nopts.checkpoint_path = checkpoint_dir / "normality.ckpt";
    m.normality_log = train_normality(m.normality, windows, nopts, val_windows);
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

TrainedModels load_models(const std::filesystem::path& dir) {
    const auto ne_path = dir / "next_event.ckpt";
    const auto nm_path = dir / "normality.ckpt";
    for (const auto& p : {ne_path, nm_path}) {
        if (!std::filesystem::exists(p)) throw DataError("missing checkpoint " + p.string() + " (run `train` first)");
    }
    const auto ne = neural::read_checkpoint(ne_path);
    const auto nm = neural::read_checkpoint(nm_path);
    TrainedModels m{next_event_model_from_manifest(ne.manifest), normality_model_from_manifest(nm.manifest), {}, {}, 0.0};
    auto ps = m.detector.parameters();
    neural::apply_checkpoint(ne, ps);
    auto ns = m.normality.parameters();
    neural::apply_checkpoint(nm, ns);
    return m;
}

nlohmann::json to_json(const TrainingLog& log) {
    nlohmann::json evals = nlohmann::json::array();
    for (const auto& e : log.evaluations) evals.push_back({{"epoch", e.epoch}, {"loss", e.loss}});
    return {{"epoch_loss", log.epoch_loss},
            {"evaluations", evals},
            {"best_epoch", log.best_epoch},
            {"best_loss", log.best_loss},
            {"update_steps", log.update_steps}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& dir, const std::string& command, const RunConfig& cfg,
                    const nlohmann::json& extra) {
    std::filesystem::create_directories(dir);
    nlohmann::json m = {{"command", command}, {"version", kVersion}, {"seed", cfg.seed}, {"config", to_json(cfg)}};
    for (const auto& [k, v] : extra.items()) m[k] = v;
    write_json(dir / "manifest.json", m);
    // Several subcommands may share a directory; keep each one's manifest too.
    write_json(dir / ("manifest." + command + ".json"), m);
    std::ofstream ini(dir / "config.ini");
    if (!ini) throw Error("cannot write " + (dir / "config.ini").string());
    ini << to_ini(cfg);
}

}  // namespace omlog::app
