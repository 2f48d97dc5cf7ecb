#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anisonet/config.hpp"
#include "anisonet/connectome.hpp"
#include "anisonet/protocol.hpp"
#include "anisonet/stats.hpp"
#include "anisonet/tasks.hpp"

namespace anisonet {

struct BuiltNetwork {
    Connectome net;
    DirectionLandscape landscape; // empty for the random control
};

// Builds one network (with pooling and input patch) from the config. The
// anisotropic net and the random control use distinct derived seed streams.
BuiltNetwork build_network(const RunConfig& cfg, bool anisotropic);

// The full stability/variability analysis of one trial set. Rate and Fano
// summaries use the settled window [plateau_begin, record_steps); PCA and PC1
// statistics run on the binned excitatory activity.
struct NetworkAnalysis {
    std::vector<double> plateau_rate;    // per trial, excitatory population
    std::vector<double> early_rate;      // per trial, first 50 steps
    std::vector<double> fano;            // per trial (binary spike-train estimator)
    std::vector<double> fano_population; // per trial, population-count series (diagnostic)
    std::vector<double> group_rates_mean; // 36 values, averaged over trials
    PairwiseDifferences pairwise;
    Eigen::VectorXd pca_explained;
    double pca_total_variance = 0.0;
    Pc1Stats pc1;
    TestResult levene_pair;    // pairwise differences at steps {10, 190}
    TestResult levene_triplet; // steps {10, 100, 190}
    double diff_variance_early = 0.0; // at step 10
    double diff_variance_late = 0.0;  // at step 190

    double mean_plateau_rate() const;
    double mean_early_rate() const;
    double mean_fano() const;
};

NetworkAnalysis analyze_trials(const TrialSet& trials, const GridSpec& spec,
                               const RunConfig& cfg);

struct NetworkRun {
    BuiltNetwork built;
    TrialSet trials;
    NetworkAnalysis analysis;
};

NetworkRun run_network_experiment(const RunConfig& cfg, bool anisotropic);

// Cross-network statistics (anisotropic vs random control).
struct Comparison {
    std::vector<double> hamming_ratio;  // per step, aniso mean / random mean
    double worst_hamming_ratio_after_50 = 0.0;
    double pc1_mse_ratio = 0.0;
    double pc1_std_ratio = 0.0;
    TestResult mwu_pair_mse;
    TestResult mwu_step_std;
    TestResult ks_group_rates;
};

Comparison compare_networks(const NetworkAnalysis& aniso, const NetworkAnalysis& random_net);

// --- artifact writing ---------------------------------------------------------

void write_build_artifacts(const std::string& dir, const RunConfig& cfg);
void write_experiment_artifacts(const std::string& dir, const RunConfig& cfg,
                                const NetworkRun* aniso, const NetworkRun* random_net,
                                bool svg = false);

struct TaskRow {
    std::string network; // "anisotropic" or "random"
    TaskMetrics metrics;
};

std::vector<TaskRow> run_task_grid(const RunConfig& cfg, const TrialSet& aniso,
                                   const TrialSet* random_net);
void write_task_artifacts(const std::string& dir, const RunConfig& cfg,
                          const std::vector<TaskRow>& rows);

double mean_task_error(const std::vector<TaskRow>& rows, const std::string& network,
                       TaskKind kind, ReadoutMethod method);

// --- benchmark -----------------------------------------------------------------

struct BenchEntry {
    std::string network;
    std::string readout; // "pooling" or "excitatory"
    double seconds_per_trial = 0.0;
    double steps_per_second = 0.0;
    double realtime_ratio = 0.0; // trial budget (2 s) / measured time
};

struct BenchReport {
    int steps = 0;
    double budget_seconds = 2.0;
    std::vector<BenchEntry> entries;
};

BenchReport run_bench(const RunConfig& cfg, int steps);
void write_bench_artifacts(const std::string& dir, const BenchReport& report);

} // namespace anisonet
