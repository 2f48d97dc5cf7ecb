#include "anisonet/simulator.hpp"

#include <algorithm>

namespace anisonet {

InjectionPlan inject_pulse(std::span<const NeuronIndex> patch, int step, double magnitude) {
    InjectionPlan plan;
    plan.reserve(patch.size());
    for (NeuronIndex n : patch) plan.push_back({step, n, magnitude});
    return plan;
}

Simulator::Simulator(const Connectome& net, const NeuronParams& params)
    : net_(&net), params_(params) {
    params_.validate();
    lambda_current_ = params_.current_factor();
    lambda_voltage_ = params_.voltage_factor();
    const size_t n = static_cast<size_t>(net.neuron_count());
    v_.assign(n, 0.0);
    current_.assign(n, 0.0);
    refractory_.assign(n, 0);
    injection_.assign(n, 0.0);
}

void Simulator::reset() {
    std::fill(v_.begin(), v_.end(), 0.0);
    std::fill(current_.begin(), current_.end(), 0.0);
    std::fill(refractory_.begin(), refractory_.end(), 0);
    pending_.clear();
}

void Simulator::advance(int steps, const InjectionPlan& injections, SpikeRaster* record,
                        int record_row) {
    const int n = net_->neuron_count();
    const int32_t mult = params_.weight_multiplier;
    const double bias = params_.i_bias;
    const double v_th = params_.v_th;

    // Bucket injections by step; plan order within a step is irrelevant since
    // injections only add.
    std::vector<std::vector<std::pair<NeuronIndex, double>>> by_step(steps);
    for (const auto& ev : injections) {
        if (ev.step >= 0 && ev.step < steps) by_step[ev.step].emplace_back(ev.neuron, ev.magnitude);
    }

    for (int s = 0; s < steps; ++s) {
        for (int i = 0; i < n; ++i) current_[i] *= lambda_current_;
        for (NeuronIndex src : pending_) {
            const auto targets = net_->targets_of(src);
            const auto weights = net_->weights_of(src);
            for (size_t k = 0; k < targets.size(); ++k)
                current_[targets[k]] += static_cast<double>(weights[k]) * mult;
        }
        if (bias != 0.0)
            for (int i = 0; i < n; ++i) current_[i] += bias;

        const bool has_injection = !by_step[s].empty();
        if (has_injection)
            for (const auto& [neuron, magnitude] : by_step[s]) injection_[neuron] += magnitude;

        emitted_.clear();
        for (int i = 0; i < n; ++i) {
            if (refractory_[i] > 0) {
                --refractory_[i];
                v_[i] = 0.0;
                continue;
            }
            double v = v_[i] * lambda_voltage_ + current_[i];
            if (has_injection) v += injection_[i];
            if (v >= v_th) {
                emitted_.push_back(static_cast<NeuronIndex>(i));
                v = 0.0;
                refractory_[i] = params_.t_ref;
            }
            v_[i] = v;
        }

        if (has_injection)
            for (const auto& [neuron, magnitude] : by_step[s]) injection_[neuron] = 0.0;

        if (record)
            for (NeuronIndex i : emitted_) record->set(record_row + s, i);
        pending_.swap(emitted_);
    }
}

SpikeRaster Simulator::run(const InjectionPlan& injections, int horizon) {
    if (horizon < 1) throw ConfigError("run horizon must be >= 1");
    reset();
    SpikeRaster raster(horizon, net_->neuron_count());
    advance(horizon, injections, &raster, 0);
    return raster;
}

std::span<const NeuronState> Simulator::states() {
    const size_t n = v_.size();
    state_view_.resize(n);
    for (size_t i = 0; i < n; ++i)
        state_view_[i] = {v_[i], current_[i], refractory_[i]};
    return state_view_;
}

} // namespace anisonet
