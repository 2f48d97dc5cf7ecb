#include "anisonet/protocol.hpp"

#include <algorithm>

#include "anisonet/errors.hpp"
#include "anisonet/simulator.hpp"

namespace anisonet {

void TrialPlan::validate() const {
    if (patterns.empty()) throw ConfigError("trial plan has no input patterns");
    if (record_steps < drop_head + bin_width + samples_per_trial - 1)
        throw ConfigError("record_steps too short for the requested binning");
    if (bin_width < 1 || drop_head < 0 || samples_per_trial < 1 || gap_steps < 0)
        throw ConfigError("invalid trial plan parameters");
}

std::vector<std::vector<NeuronIndex>> make_leave_one_out(std::span<const NeuronIndex> patch) {
    std::vector<std::vector<NeuronIndex>> patterns;
    patterns.reserve(patch.size());
    for (size_t k = 0; k < patch.size(); ++k) {
        std::vector<NeuronIndex> pattern;
        pattern.reserve(patch.size() - 1);
        for (size_t i = 0; i < patch.size(); ++i)
            if (i != k) pattern.push_back(patch[i]);
        patterns.push_back(std::move(pattern));
    }
    return patterns;
}

TrialPlan make_trial_plan(const Connectome& net, const NeuronParams& params) {
    if (net.input_patch.empty())
        throw ConfigError("connectome has no input patch; call set_input_patch first");
    TrialPlan plan;
    plan.patterns = make_leave_one_out(net.input_patch);
    plan.pulse_magnitude = params.v_th;
    return plan;
}

Eigen::MatrixXd bin_raster(const SpikeRaster& raster, int unit_begin, int unit_end,
                           int drop_head, int bin_width, int samples) {
    if (raster.steps() < drop_head + bin_width + samples - 1)
        throw ConfigError("raster too short: need at least " +
                          std::to_string(drop_head + bin_width + samples - 1) + " steps, have " +
                          std::to_string(raster.steps()));
    const int units = unit_end - unit_begin;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(samples, units);
    // Scatter each spike into the sample rows whose window covers its step.
    for (int t = drop_head; t < raster.steps(); ++t) {
        const int row_lo = std::max(0, t - drop_head - bin_width + 1);
        const int row_hi = std::min(samples - 1, t - drop_head);
        if (row_lo > row_hi) continue;
        const auto words = raster.row(t);
        for (size_t w = 0; w < words.size(); ++w) {
            uint64_t bits = words[w];
            while (bits) {
                const int n = static_cast<int>(w) * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if (n < unit_begin || n >= unit_end) continue;
                for (int r = row_lo; r <= row_hi; ++r) out(r, n - unit_begin) += 1.0;
            }
        }
    }
    return out;
}

namespace {

SpikeRaster record_one_trial(Simulator& sim, const TrialPlan& plan, int trial) {
    SpikeRaster raster(plan.record_steps, sim.connectome().neuron_count());
    const auto pulse = inject_pulse(plan.patterns[trial], 0, plan.pulse_magnitude);
    sim.advance(plan.record_steps, pulse, &raster, 0);
    sim.reset();
    sim.advance(plan.gap_steps);
    return raster;
}

} // namespace

TrialSet make_trialset(std::vector<SpikeRaster> rasters, int exc_count, int pool_base,
                       int pool_count, const TrialPlan& plan) {
    TrialSet set;
    set.exc_count = exc_count;
    set.pool_count = pool_count;
    for (const auto& raster : rasters) {
        set.binned_exc.push_back(
            bin_raster(raster, 0, exc_count, plan.drop_head, plan.bin_width,
                       plan.samples_per_trial));
        if (pool_count > 0)
            set.binned_pool.push_back(bin_raster(raster, pool_base, pool_base + pool_count,
                                                 plan.drop_head, plan.bin_width,
                                                 plan.samples_per_trial));
    }
    set.rasters = std::move(rasters);
    return set;
}

TrialSet run_trials(const Connectome& net, const NeuronParams& params, const TrialPlan& plan) {
    plan.validate();
    std::vector<SpikeRaster> rasters;
    rasters.reserve(plan.patterns.size());
    Simulator sim(net, params);
    sim.reset();
    for (size_t trial = 0; trial < plan.patterns.size(); ++trial)
        rasters.push_back(record_one_trial(sim, plan, static_cast<int>(trial)));
    return make_trialset(std::move(rasters), net.exc_count(), net.pool_base(), net.pool_count(),
                         plan);
}

SpikeRaster run_single_trial(const Connectome& net, const NeuronParams& params,
                             const TrialPlan& plan, int trial) {
    plan.validate();
    if (trial < 0 || trial >= static_cast<int>(plan.patterns.size()))
        throw ConfigError("trial index out of range");
    Simulator sim(net, params);
    sim.reset();
    return record_one_trial(sim, plan, trial);
}

Eigen::MatrixXd pooled_patch_counts(const Eigen::MatrixXd& binned_exc, const GridSpec& spec,
                                    const PoolingLayout& layout) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(binned_exc.rows(), layout.neuron_count());
    for (int p = 0; p < layout.neuron_count(); ++p) {
        for (NeuronIndex member : patch_members(spec, layout.origins[p], layout.window))
            out.col(p) += binned_exc.col(member);
    }
    return out;
}

} // namespace anisonet
