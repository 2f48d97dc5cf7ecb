#include "anisonet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <json.hpp>
#include <limits>
#include <numeric>

#include "anisonet/artifacts.hpp"
#include "anisonet/errors.hpp"
#include "anisonet/rng.hpp"
#include "anisonet/simulator.hpp"

namespace anisonet {

namespace {

using nlohmann::json;

constexpr uint64_t kLandscapeStream = 1;
constexpr uint64_t kAnisotropicStream = 2;
constexpr uint64_t kRandomStream = 3;

double mean_of(const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double population_variance_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double mean = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / xs.size();
}

} // namespace

double NetworkAnalysis::mean_plateau_rate() const { return mean_of(plateau_rate); }
double NetworkAnalysis::mean_early_rate() const { return mean_of(early_rate); }
double NetworkAnalysis::mean_fano() const { return mean_of(fano); }

BuiltNetwork build_network(const RunConfig& cfg, bool anisotropic) {
    BuiltNetwork built;
    if (anisotropic) {
        built.landscape = build_landscape(cfg.grid, cfg.perlin_scale,
                                          derive_seed(cfg.seed, kLandscapeStream), cfg.shift_mode);
        built.net = build_anisotropic(cfg.grid, built.landscape, cfg.connectivity,
                                      derive_seed(cfg.seed, kAnisotropicStream));
    } else {
        built.net = build_random_control(cfg.grid, cfg.connectivity,
                                         derive_seed(cfg.seed, kRandomStream));
    }
    attach_pooling(built.net);
    set_input_patch(built.net, cfg.input_origin);
    return built;
}

NetworkAnalysis analyze_trials(const TrialSet& trials, const GridSpec& spec,
                               const RunConfig& cfg) {
    NetworkAnalysis a;
    const int n_exc = spec.exc_count();
    const int steps = trials.rasters.empty() ? 0 : trials.rasters[0].steps();
    const int plateau = std::min(cfg.plateau_begin, steps - 1);

    a.group_rates_mean.assign(36, 0.0);
    for (const auto& raster : trials.rasters) {
        a.plateau_rate.push_back(mean_firing_rate(raster, n_exc, plateau, steps));
        a.early_rate.push_back(mean_firing_rate(raster, n_exc, 0, std::min(50, steps)));
        a.fano.push_back(mean_binary_fano(raster, n_exc, plateau, steps));
        a.fano_population.push_back(population_count_fano(raster, n_exc, plateau, steps));
        const auto rates = group_rates(raster, spec);
        for (size_t g = 0; g < rates.size() && g < a.group_rates_mean.size(); ++g)
            a.group_rates_mean[g] += rates[g] / trials.rasters.size();
    }

    a.pairwise = pairwise_differences(trials.rasters, n_exc);

    const PcaResult pca = pca_project(trials.binned_exc, 2);
    a.pca_explained = pca.explained_variance;
    a.pca_total_variance = pca.total_variance;
    a.pc1 = pc1_statistics(pca.projections);

    const auto diff_10 = pairwise_differences_at(trials.rasters, n_exc, 10);
    const auto diff_100 = pairwise_differences_at(trials.rasters, n_exc, 100);
    const auto diff_190 = pairwise_differences_at(trials.rasters, n_exc, 190);
    a.diff_variance_early = population_variance_of(diff_10);
    a.diff_variance_late = population_variance_of(diff_190);
    a.levene_pair = levene({diff_10, diff_190});
    a.levene_triplet = levene({diff_10, diff_100, diff_190});
    return a;
}

NetworkRun run_network_experiment(const RunConfig& cfg, bool anisotropic) {
    NetworkRun run;
    run.built = build_network(cfg, anisotropic);
    const NeuronParams params = cfg.neuron_params_for(anisotropic ? NetworkChoice::anisotropic
                                                                  : NetworkChoice::random);
    TrialPlan plan = make_trial_plan(run.built.net, params);
    plan.record_steps = cfg.record_steps;
    plan.gap_steps = cfg.gap_steps;
    plan.drop_head = cfg.drop_head;
    plan.bin_width = cfg.bin_width;
    plan.samples_per_trial = cfg.samples_per_trial;
    run.trials = run_trials(run.built.net, params, plan);
    run.analysis = analyze_trials(run.trials, cfg.grid, cfg);
    return run;
}

Comparison compare_networks(const NetworkAnalysis& aniso, const NetworkAnalysis& random_net) {
    Comparison cmp;
    const size_t steps = std::min(aniso.pairwise.mean.size(), random_net.pairwise.mean.size());
    cmp.hamming_ratio.resize(steps);
    cmp.worst_hamming_ratio_after_50 = 0.0;
    for (size_t s = 0; s < steps; ++s) {
        const double r = random_net.pairwise.mean[s];
        const double a = aniso.pairwise.mean[s];
        cmp.hamming_ratio[s] = r > 0.0 ? a / r : (a > 0.0 ? std::numeric_limits<double>::infinity()
                                                          : 0.0);
        if (s > 50)
            cmp.worst_hamming_ratio_after_50 =
                std::max(cmp.worst_hamming_ratio_after_50, cmp.hamming_ratio[s]);
    }
    cmp.pc1_mse_ratio = random_net.pc1.normalized_mse > 0.0
                            ? aniso.pc1.normalized_mse / random_net.pc1.normalized_mse
                            : std::numeric_limits<double>::infinity();
    cmp.pc1_std_ratio = random_net.pc1.mean_step_std > 0.0
                            ? aniso.pc1.mean_step_std / random_net.pc1.mean_step_std
                            : std::numeric_limits<double>::infinity();
    cmp.mwu_pair_mse = mann_whitney_u(aniso.pc1.pair_mse, random_net.pc1.pair_mse);
    cmp.mwu_step_std = mann_whitney_u(aniso.pc1.step_std, random_net.pc1.step_std);
    cmp.ks_group_rates = ks_two_sample(aniso.group_rates_mean, random_net.group_rates_mean);
    return cmp;
}

namespace {

json test_to_json(const TestResult& t) {
    return json{{"test", t.test}, {"statistic", t.statistic}, {"p_value", t.p_value}};
}

json analysis_to_json(const NetworkAnalysis& a) {
    json j;
    j["mean_plateau_rate"] = a.mean_plateau_rate();
    j["mean_early_rate"] = a.mean_early_rate();
    j["plateau_rate"] = a.plateau_rate;
    j["early_rate"] = a.early_rate;
    j["fano_mean"] = a.mean_fano();
    j["fano"] = a.fano;
    j["fano_population"] = a.fano_population;
    j["group_rates_mean"] = a.group_rates_mean;
    j["pca_explained_variance"] = std::vector<double>(a.pca_explained.begin(),
                                                      a.pca_explained.end());
    j["pca_total_variance"] = a.pca_total_variance;
    j["pc1_normalized_mse"] = a.pc1.normalized_mse;
    j["pc1_mean_step_std"] = a.pc1.mean_step_std;
    j["levene_pair"] = test_to_json(a.levene_pair);
    j["levene_triplet"] = test_to_json(a.levene_triplet);
    j["diff_variance_step10"] = a.diff_variance_early;
    j["diff_variance_step190"] = a.diff_variance_late;
    return j;
}

void write_network_files(const std::string& dir, const std::string& label, const RunConfig& cfg,
                         const NetworkRun& run, bool svg, json& manifest_files) {
    const auto path = [&](const std::string& stem) { return dir + "/" + stem + "_" + label + ".csv"; };

    save_events(path("events"), run.trials.rasters);
    manifest_files.push_back("events_" + label + ".csv");

    const auto& binned = cfg.readout_source == ReadoutSource::pooling ? run.trials.binned_pool
                                                                      : run.trials.binned_exc;
    const std::string binned_name =
        cfg.readout_source == ReadoutSource::pooling ? "binned_pooling" : "binned_excitatory";
    save_binned(path(binned_name), binned);
    manifest_files.push_back(binned_name + "_" + label + ".csv");

    save_pairwise_diff(path("pairwise_diff"), run.analysis.pairwise);
    manifest_files.push_back("pairwise_diff_" + label + ".csv");

    const PcaResult pca = pca_project(run.trials.binned_exc, 2);
    save_pca_projections(path("pca_projections"), pca.projections);
    manifest_files.push_back("pca_projections_" + label + ".csv");

    save_group_rates(path("group_rates"), run.analysis.group_rates_mean);
    manifest_files.push_back("group_rates_" + label + ".csv");

    if (svg && !run.trials.rasters.empty()) {
        save_raster_svg(dir + "/raster_" + label + "_trial0.svg", run.trials.rasters[0],
                        run.built.net.exc_count());
        manifest_files.push_back("raster_" + label + "_trial0.svg");
    }
}

} // namespace

void write_build_artifacts(const std::string& dir, const RunConfig& cfg) {
    std::filesystem::create_directories(dir);
    json files = json::array();
    if (cfg.network != NetworkChoice::random) {
        const BuiltNetwork built = build_network(cfg, true);
        save_connectome(dir + "/connectome_anisotropic.csv", built.net);
        save_landscape(dir + "/landscape.csv", built.landscape);
        files.push_back("connectome_anisotropic.csv");
        files.push_back("landscape.csv");
    }
    if (cfg.network != NetworkChoice::anisotropic) {
        const BuiltNetwork built = build_network(cfg, false);
        save_connectome(dir + "/connectome_random.csv", built.net);
        files.push_back("connectome_random.csv");
    }
    json manifest;
    manifest["command"] = "build";
    manifest["config_hash"] = cfg.config_hash();
    manifest["seed"] = cfg.seed;
    manifest["files"] = files;
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

void write_experiment_artifacts(const std::string& dir, const RunConfig& cfg,
                                const NetworkRun* aniso, const NetworkRun* random_net, bool svg) {
    std::filesystem::create_directories(dir);
    json files = json::array();
    json metrics;
    metrics["config_hash"] = cfg.config_hash();
    if (aniso) {
        write_network_files(dir, "anisotropic", cfg, *aniso, svg, files);
        metrics["anisotropic"] = analysis_to_json(aniso->analysis);
    }
    if (random_net) {
        write_network_files(dir, "random", cfg, *random_net, svg, files);
        metrics["random"] = analysis_to_json(random_net->analysis);
    }
    if (aniso && random_net) {
        const Comparison cmp = compare_networks(aniso->analysis, random_net->analysis);
        json j;
        j["worst_hamming_ratio_after_50"] = cmp.worst_hamming_ratio_after_50;
        j["pc1_mse_ratio"] = cmp.pc1_mse_ratio;
        j["pc1_std_ratio"] = cmp.pc1_std_ratio;
        j["mwu_pair_mse"] = test_to_json(cmp.mwu_pair_mse);
        j["mwu_step_std"] = test_to_json(cmp.mwu_step_std);
        j["ks_group_rates"] = test_to_json(cmp.ks_group_rates);
        metrics["comparison"] = j;
    }
    write_text_file(dir + "/metrics.json", metrics.dump(2) + "\n");
    files.push_back("metrics.json");

    json manifest;
    manifest["command"] = "experiment";
    manifest["config_hash"] = cfg.config_hash();
    manifest["seed"] = cfg.seed;
    manifest["record_steps"] = cfg.record_steps;
    manifest["trials"] = aniso         ? aniso->trials.trial_count()
                         : random_net ? random_net->trials.trial_count()
                                      : 0;
    manifest["neurons"] =
        cfg.grid.exc_count() + cfg.grid.inh_count() + build_pooling_layout(cfg.grid).neuron_count();
    manifest["files"] = files;
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

std::vector<TaskRow> run_task_grid(const RunConfig& cfg, const TrialSet& aniso,
                                   const TrialSet* random_net) {
    std::vector<TaskRow> rows;
    const int trials = aniso.trial_count();
    const std::vector<TaskSpec> tasks = {
        TaskSpec::representation(trials, cfg.representation_test_trial),
        TaskSpec::generalisation(trials, cfg.generalisation_test_trial),
    };
    const std::vector<ReadoutMethod> methods = {ReadoutMethod::ols_pooling,
                                                ReadoutMethod::elastic_net_excitatory};

    for (const std::string& name : cfg.trajectories) {
        const Trajectory trajectory =
            generate(builtin_script(name), cfg.samples_per_trial, cfg.trajectory_jitter_seed,
                     cfg.trajectory_jitter_amplitude);
        for (const auto& task : tasks) {
            for (const auto method : methods) {
                rows.push_back({"anisotropic", run_task(aniso, trajectory, task, method,
                                                        cfg.elastic, cfg.smoothing)});
                if (random_net)
                    rows.push_back({"random", run_task(*random_net, trajectory, task, method,
                                                       cfg.elastic, cfg.smoothing)});
            }
        }
    }
    return rows;
}

double mean_task_error(const std::vector<TaskRow>& rows, const std::string& network,
                       TaskKind kind, ReadoutMethod method) {
    double sum = 0.0;
    int count = 0;
    for (const auto& row : rows) {
        if (row.network != network || row.metrics.kind != kind || row.metrics.method != method)
            continue;
        sum += row.metrics.nrmse_smoothed;
        ++count;
    }
    if (count == 0) throw NumericalError("mean_task_error: no matching task rows");
    return sum / count;
}

void write_task_artifacts(const std::string& dir, const RunConfig& cfg,
                          const std::vector<TaskRow>& rows) {
    std::filesystem::create_directories(dir + "/predictions");
    std::filesystem::create_directories(dir + "/models");

    std::string table = "network,trajectory,task,method,nrmse,nrmse_raw,"
                        "nrmse_x,nrmse_y,nrmse_z,converged\n";
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        table += row.network + "," + m.trajectory + "," + to_string(m.kind) + "," +
                 to_string(m.method) + "," + format_double(m.nrmse_smoothed) + "," +
                 format_double(m.nrmse_raw) + "," + format_double(m.nrmse_smoothed_dim[0]) + "," +
                 format_double(m.nrmse_smoothed_dim[1]) + "," +
                 format_double(m.nrmse_smoothed_dim[2]) + "," +
                 (m.model.converged ? "1" : "0") + "\n";

        const std::string stem =
            row.network + "_" + m.trajectory + "_" + to_string(m.kind) + "_" + to_string(m.method);
        save_trajectory_csv(dir + "/predictions/" + stem + "_raw.csv",
                            {m.trajectory, m.prediction_raw, 100.0});
        save_trajectory_csv(dir + "/predictions/" + stem + "_smoothed.csv",
                            {m.trajectory, m.prediction_smoothed, 100.0});
        save_model(dir + "/models/" + stem + ".csv", m.model,
                   m.method == ReadoutMethod::ols_pooling ? "pooling" : "excitatory");
    }
    write_text_file(dir + "/task_metrics.csv", table);

    for (const std::string& name : cfg.trajectories) {
        const Trajectory t = generate(builtin_script(name), cfg.samples_per_trial,
                                      cfg.trajectory_jitter_seed, cfg.trajectory_jitter_amplitude);
        save_trajectory_csv(dir + "/predictions/target_" + name + ".csv", t);
    }

    json manifest;
    manifest["command"] = "train-eval";
    manifest["config_hash"] = cfg.config_hash();
    manifest["rows"] = rows.size();
    write_text_file(dir + "/task_manifest.json", manifest.dump(2) + "\n");
}

BenchReport run_bench(const RunConfig& cfg, int steps) {
    if (steps < 1) throw ConfigError("bench horizon must be >= 1 step");
    BenchReport report;
    report.steps = steps;

    for (const bool anisotropic : {true, false}) {
        const BuiltNetwork built = build_network(cfg, anisotropic);
        const NeuronParams params = cfg.neuron_params_for(
            anisotropic ? NetworkChoice::anisotropic : NetworkChoice::random);
        Simulator sim(built.net, params);
        const auto pulse = inject_pulse(built.net.input_patch, 0, params.v_th);

        for (const bool pooling_readout : {true, false}) {
            // Warm-up, then median of three timed trials. The timed path covers
            // the simulation plus feature extraction for the readout in use.
            auto one_trial = [&]() {
                sim.reset();
                SpikeRaster raster(steps, built.net.neuron_count());
                sim.advance(steps, pulse, &raster, 0);
                const int samples = steps - cfg.drop_head - cfg.bin_width + 1;
                if (samples > 0) {
                    if (pooling_readout)
                        bin_raster(raster, built.net.pool_base(), built.net.neuron_count(),
                                   cfg.drop_head, cfg.bin_width, samples);
                    else
                        bin_raster(raster, 0, built.net.exc_count(), cfg.drop_head, cfg.bin_width,
                                   samples);
                }
            };
            one_trial();
            std::vector<double> times;
            for (int rep = 0; rep < 3; ++rep) {
                const auto start = std::chrono::steady_clock::now();
                one_trial();
                const auto stop = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double>(stop - start).count());
            }
            std::sort(times.begin(), times.end());
            BenchEntry entry;
            entry.network = anisotropic ? "anisotropic" : "random";
            entry.readout = pooling_readout ? "pooling" : "excitatory";
            entry.seconds_per_trial = times[1];
            entry.steps_per_second = steps / times[1];
            entry.realtime_ratio = report.budget_seconds / times[1];
            report.entries.push_back(entry);
        }
    }
    return report;
}

void write_bench_artifacts(const std::string& dir, const BenchReport& report) {
    std::filesystem::create_directories(dir);
    json j;
    j["steps"] = report.steps;
    j["budget_seconds"] = report.budget_seconds;
    j["entries"] = json::array();
    for (const auto& e : report.entries) {
        j["entries"].push_back({{"network", e.network},
                                {"readout", e.readout},
                                {"seconds_per_trial", e.seconds_per_trial},
                                {"steps_per_second", e.steps_per_second},
                                {"realtime_ratio", e.realtime_ratio}});
    }
    write_text_file(dir + "/bench.json", j.dump(2) + "\n");
}

} // namespace anisonet
