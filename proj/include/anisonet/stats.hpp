#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "anisonet/grid.hpp"
#include "anisonet/raster.hpp"

namespace anisonet {

// --- firing statistics ------------------------------------------------------

// Total spikes / (steps * neurons) over neurons [0, neuron_end) and steps
// [step_begin, step_end); step_end < 0 means the full run.
double mean_firing_rate(const SpikeRaster& raster, int neuron_end, int step_begin = 0,
                        int step_end = -1);

// Mean rate per 10x10 group of the excitatory sheet over the full run,
// 36 values indexed top-left to bottom-right.
std::vector<double> group_rates(const SpikeRaster& raster, const GridSpec& spec);

// Variance / mean of a count series (population variance). Constant series
// give 0; independent Poisson counts give ~1.
double fano_factor(std::span<const double> counts);

// Fano factor of the per-step population spike-count series over the window.
double population_count_fano(const SpikeRaster& raster, int neuron_end, int step_begin = 0,
                             int step_end = -1);

// Per-neuron Fano factor of the binary spike series (variance/mean of the 0/1
// train = 1 - rate), averaged over neurons that fired in the window.
double mean_binary_fano(const SpikeRaster& raster, int neuron_end, int step_begin = 0,
                        int step_end = -1);

// --- trial-to-trial differences ---------------------------------------------

struct PairwiseDifferences {
    std::vector<double> mean; // per step, over all trial pairs
    std::vector<double> std;  // per step
};

// Per-step Hamming distance between the binary population vectors of two
// trials, normalized by neuron count, aggregated over all trial pairs.
PairwiseDifferences pairwise_differences(std::span<const SpikeRaster> rasters, int neuron_end);

// The raw per-pair normalized differences at one step (for hypothesis tests).
std::vector<double> pairwise_differences_at(std::span<const SpikeRaster> rasters, int neuron_end,
                                            int step);

// --- PCA ---------------------------------------------------------------------

struct PcaResult {
    Eigen::MatrixXd components;          // features x k, orthonormal columns
    Eigen::VectorXd explained_variance;  // k, descending
    double total_variance = 0.0;         // trace of the covariance
    Eigen::VectorXd mean;                // features
    std::vector<Eigen::MatrixXd> projections; // per trial: rows x k
};

// PCA fitted on the row-concatenation of all trial matrices (mean-centered),
// each trial then projected onto the top k components.
PcaResult pca_project(std::span<const Eigen::MatrixXd> trials, int k = 2);

struct Pc1Stats {
    double normalized_mse = 0.0;     // mean pairwise MSE / mean per-trial PC1 variance
    double mean_step_std = 0.0;      // per-step std across trials, averaged over steps
    std::vector<double> pair_mse;    // normalized, one per trial pair
    std::vector<double> step_std;    // per step
};

Pc1Stats pc1_statistics(std::span<const Eigen::MatrixXd> projections);

// --- hypothesis tests ---------------------------------------------------------

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::string test;
};

// Levene's test on absolute deviations from group means, F-distribution
// p-value. Requires >= 2 groups of >= 3 samples each.
TestResult levene(const std::vector<std::vector<double>>& samples);

// Mann-Whitney U (U of the first sample), normal approximation with tie and
// continuity correction, two-sided.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// Two-sample Kolmogorov-Smirnov, asymptotic p-value.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

double normal_cdf(double z);

} // namespace anisonet
