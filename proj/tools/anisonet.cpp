#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>

#include "anisonet/artifacts.hpp"
#include "anisonet/errors.hpp"
#include "anisonet/pipeline.hpp"

namespace {

using namespace anisonet;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "run configuration file")->required();
    cmd->add_option("-o,--output", args.output_dir,
                    "output directory (default: config [output] dir, $ANISONET_OUT, or ./out)");
    cmd->add_flag("-v,--verbose", args.verbose, "print progress");
}

RunConfig load_config(const CommonArgs& args) { return RunConfig::from_file(args.config_path); }

void note(const CommonArgs& args, const std::string& msg) {
    if (args.verbose) std::fprintf(stderr, "%s\n", msg.c_str());
}

int cmd_build(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const std::string dir = resolve_output_dir(cfg, args.output_dir);
    note(args, "building networks into " + dir);
    write_build_artifacts(dir, cfg);
    std::printf("build: wrote connectome files to %s (config hash %016llx)\n", dir.c_str(),
                static_cast<unsigned long long>(cfg.config_hash()));
    return 0;
}

int cmd_experiment(const CommonArgs& args, bool dry_run, bool svg) {
    const RunConfig cfg = load_config(args);
    if (dry_run) {
        std::printf("experiment: config ok (hash %016llx), dry run, nothing written\n",
                    static_cast<unsigned long long>(cfg.config_hash()));
        return 0;
    }
    const std::string dir = resolve_output_dir(cfg, args.output_dir);

    std::optional<NetworkRun> aniso, random_net;
    if (cfg.network != NetworkChoice::random) {
        note(args, "running anisotropic trials");
        aniso = run_network_experiment(cfg, true);
    }
    if (cfg.network != NetworkChoice::anisotropic) {
        note(args, "running random-control trials");
        random_net = run_network_experiment(cfg, false);
    }
    note(args, "writing artifacts to " + dir);
    write_experiment_artifacts(dir, cfg, aniso ? &*aniso : nullptr,
                               random_net ? &*random_net : nullptr, svg);
    if (aniso)
        std::printf("experiment[anisotropic]: plateau rate %.4f, Fano %.3f\n",
                    aniso->analysis.mean_plateau_rate(), aniso->analysis.mean_fano());
    if (random_net)
        std::printf("experiment[random]: plateau rate %.4f, Fano %.3f\n",
                    random_net->analysis.mean_plateau_rate(), random_net->analysis.mean_fano());
    std::printf("experiment: artifacts in %s\n", dir.c_str());
    return 0;
}

int cmd_train_eval(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const std::string dir = resolve_output_dir(cfg, args.output_dir);

    note(args, "running anisotropic trials");
    const NetworkRun aniso = run_network_experiment(cfg, true);
    note(args, "running random-control trials");
    const NetworkRun random_net = run_network_experiment(cfg, false);

    note(args, "fitting the task grid");
    const auto rows = run_task_grid(cfg, aniso.trials, &random_net.trials);
    write_task_artifacts(dir, cfg, rows);

    std::printf("train-eval: %zu rows -> %s/task_metrics.csv\n", rows.size(), dir.c_str());
    for (const auto kind : {TaskKind::representation, TaskKind::generalisation}) {
        for (const auto method : {ReadoutMethod::ols_pooling, ReadoutMethod::elastic_net_excitatory}) {
            std::printf("  %-15s %-24s aniso %.4f   random %.4f\n", to_string(kind).c_str(),
                        to_string(method).c_str(),
                        mean_task_error(rows, "anisotropic", kind, method),
                        mean_task_error(rows, "random", kind, method));
        }
    }
    return 0;
}

int cmd_bench(const CommonArgs& args, int steps) {
    const RunConfig cfg = load_config(args);
    const std::string dir = resolve_output_dir(cfg, args.output_dir);
    const BenchReport report = run_bench(cfg, steps);
    write_bench_artifacts(dir, report);
    std::printf("bench: %d-step trials, %.1f s real-time budget\n", report.steps,
                report.budget_seconds);
    for (const auto& e : report.entries)
        std::printf("  %-12s %-10s %.3f s/trial  (%.0f steps/s, %.2fx real-time)\n",
                    e.network.c_str(), e.readout.c_str(), e.seconds_per_trial,
                    e.steps_per_second, e.realtime_ratio);
    return 0;
}

int cmd_stats(const CommonArgs& args, const std::string& events_dir) {
    const RunConfig cfg = load_config(args);
    const std::string in_dir = events_dir.empty() ? resolve_output_dir(cfg, args.output_dir)
                                                  : events_dir;

    // Verify the manifest matches this config before trusting the artifacts.
    std::ifstream manifest_in(in_dir + "/manifest.json");
    if (!manifest_in) throw IoError("cannot open manifest in '" + in_dir + "'");
    nlohmann::json manifest = nlohmann::json::parse(manifest_in);
    if (manifest.value("config_hash", 0ull) != cfg.config_hash())
        throw ConfigError("manifest config hash does not match the supplied config");
    const int trials = manifest.value("trials", 0);
    const int steps = manifest.value("record_steps", 0);
    const int neurons = manifest.value("neurons", 0);

    TrialPlan plan;
    plan.patterns.assign(trials, {});
    plan.record_steps = cfg.record_steps;
    plan.gap_steps = cfg.gap_steps;
    plan.drop_head = cfg.drop_head;
    plan.bin_width = cfg.bin_width;
    plan.samples_per_trial = cfg.samples_per_trial;

    const int pool_count = build_pooling_layout(cfg.grid).neuron_count();
    const int pool_base = cfg.grid.exc_count() + cfg.grid.inh_count();

    for (const std::string label : {"anisotropic", "random"}) {
        const std::string events = in_dir + "/events_" + label + ".csv";
        if (!std::filesystem::exists(events)) continue;
        auto rasters = load_events(events, trials, steps, neurons);
        const TrialSet set = make_trialset(std::move(rasters), cfg.grid.exc_count(), pool_base,
                                           pool_count, plan);
        const NetworkAnalysis a = analyze_trials(set, cfg.grid, cfg);
        std::printf("stats[%s]: plateau rate %.4f, Fano %.3f, PC1 nMSE %.4f, PC1 std %.4f\n",
                    label.c_str(), a.mean_plateau_rate(), a.mean_fano(), a.pc1.normalized_mse,
                    a.pc1.mean_step_std);
        std::printf("stats[%s]: levene(10,190) W=%.2f p=%.3g; levene(10,100,190) W=%.2f p=%.3g\n",
                    label.c_str(), a.levene_pair.statistic, a.levene_pair.p_value,
                    a.levene_triplet.statistic, a.levene_triplet.p_value);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic spiking-network robot-control pipeline"};
    app.require_subcommand(1);

    CommonArgs build_args, exp_args, train_args, bench_args, stats_args;
    bool dry_run = false, svg = false;
    int bench_steps = 200;
    std::string events_dir;

    add_common(app.add_subcommand("build", "build and export connectomes"), build_args);
    auto* exp = app.add_subcommand("experiment", "run the 25-trial protocol and stability stats");
    add_common(exp, exp_args);
    exp->add_flag("--dry-run", dry_run, "validate the config and exit");
    exp->add_flag("--svg", svg, "write an SVG raster for trial 0");
    add_common(app.add_subcommand("train-eval", "train and score the task grid"), train_args);
    auto* bench = app.add_subcommand("bench", "measure trial wall-clock against real-time");
    add_common(bench, bench_args);
    bench->add_option("--steps", bench_steps, "steps per timed trial (default 200)");
    auto* stats = app.add_subcommand("stats", "recompute statistics from stored events");
    add_common(stats, stats_args);
    stats->add_option("--events-dir", events_dir, "directory holding events/manifest files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("build")) return cmd_build(build_args);
        if (app.got_subcommand("experiment")) return cmd_experiment(exp_args, dry_run, svg);
        if (app.got_subcommand("train-eval")) return cmd_train_eval(train_args);
        if (app.got_subcommand("bench")) return cmd_bench(bench_args, bench_steps);
        if (app.got_subcommand("stats")) return cmd_stats(stats_args, events_dir);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
