#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "anisonet/connectome.hpp"
#include "anisonet/neuron.hpp"
#include "anisonet/raster.hpp"

namespace anisonet {

enum class ReadoutSource { pooling, excitatory };

struct TrialPlan {
    std::vector<std::vector<NeuronIndex>> patterns; // leave-one-out input sets
    int record_steps = 215;
    int gap_steps = 30;
    int drop_head = 5;
    int bin_width = 10;
    int samples_per_trial = 200;
    double pulse_magnitude = 64000.0;

    void validate() const;
};

// Pattern k is the patch minus its k-th neuron (25 patterns of 24 neurons).
std::vector<std::vector<NeuronIndex>> make_leave_one_out(std::span<const NeuronIndex> patch);

TrialPlan make_trial_plan(const Connectome& net, const NeuronParams& params);

// Recorded rasters plus the binned feature matrices for both readout paths.
struct TrialSet {
    std::vector<SpikeRaster> rasters;           // trial -> record_steps x neuron_count
    std::vector<Eigen::MatrixXd> binned_exc;    // trial -> samples x npop_E
    std::vector<Eigen::MatrixXd> binned_pool;   // trial -> samples x pool_count
    int exc_count = 0;
    int pool_count = 0;

    int trial_count() const { return static_cast<int>(rasters.size()); }
    const std::vector<Eigen::MatrixXd>& binned(ReadoutSource source) const {
        return source == ReadoutSource::pooling ? binned_pool : binned_exc;
    }
};

// Sliding-window spike counts for units [unit_begin, unit_end): drops the
// first `drop_head` steps, then width `bin_width`, stride 1, keeping the
// first `samples` windows (one surplus window is discarded). Throws
// ConfigError when the raster is too short.
Eigen::MatrixXd bin_raster(const SpikeRaster& raster, int unit_begin, int unit_end,
                           int drop_head = 5, int bin_width = 10, int samples = 200);

// Runs the full leave-one-out protocol: per pattern, pulse at step 0, record,
// reset membranes, then the silent inter-trial gap. Trials are isolated by
// the reset, so each raster is a pure function of (connectome, params, pattern).
TrialSet run_trials(const Connectome& net, const NeuronParams& params, const TrialPlan& plan);

// Bins already-recorded rasters into a TrialSet (used when reloading events).
TrialSet make_trialset(std::vector<SpikeRaster> rasters, int exc_count, int pool_base,
                       int pool_count, const TrialPlan& plan);

// Single-trial runner (used for the isolation property and the trial CLI).
SpikeRaster run_single_trial(const Connectome& net, const NeuronParams& params,
                             const TrialPlan& plan, int trial);

// Diagnostic pooling path: patch-summed binned excitatory counts (not the
// pooling neurons' own spikes).
Eigen::MatrixXd pooled_patch_counts(const Eigen::MatrixXd& binned_exc, const GridSpec& spec,
                                    const PoolingLayout& layout);

} // namespace anisonet
