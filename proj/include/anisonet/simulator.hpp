#pragma once

#include <span>
#include <vector>

#include "anisonet/connectome.hpp"
#include "anisonet/neuron.hpp"
#include "anisonet/raster.hpp"

namespace anisonet {

struct InjectionEvent {
    int32_t step;        // relative to the start of the run/advance call
    NeuronIndex neuron;
    double magnitude;    // added to the membrane potential at that step
};
using InjectionPlan = std::vector<InjectionEvent>;

// Injection of one threshold-reaching current to every patch neuron at `step`
// (forces one spike per neuron, given a rested membrane).
InjectionPlan inject_pulse(std::span<const NeuronIndex> patch, int step, double magnitude);

// Discrete-time engine with Loihi semantics. Per step and neuron:
//   1) I <- I * (4096 - delta_I)/4096 + sum(arriving weight * multiplier) + bias
//   2) refractory: decrement, v pinned to 0, no integration;
//      otherwise v <- v * (4096 - delta_v)/4096 + I + injection
//   3) v >= v_th: spike, v <- 0, refractory <- t_ref
// Spikes emitted at step t arrive at step t+1 (delay 1). Arithmetic is double
// precision with a fixed (source-index) accumulation order; magnitudes stay
// many orders below the double range, so hardware-style saturation never
// engages and is not emulated.
//
// One instance advances single-threaded; independent instances share the
// read-only connectome freely.
class Simulator {
public:
    Simulator(const Connectome& net, const NeuronParams& params);

    // Zeroes v, I and refractory counters and drops in-flight spikes.
    void reset();

    // Advances `steps` steps from the current state. Injection steps are
    // relative to this call. If `record` is given, spikes land in rows
    // [record_row, record_row + steps).
    void advance(int steps, const InjectionPlan& injections = {}, SpikeRaster* record = nullptr,
                 int record_row = 0);

    // Fresh-state run over `horizon` steps; returns the full raster.
    SpikeRaster run(const InjectionPlan& injections, int horizon);

    std::span<const NeuronState> states();
    const Connectome& connectome() const { return *net_; }
    const NeuronParams& params() const { return params_; }

private:
    const Connectome* net_;
    NeuronParams params_;
    double lambda_current_;
    double lambda_voltage_;
    std::vector<double> v_;
    std::vector<double> current_;
    std::vector<int32_t> refractory_;
    std::vector<NeuronIndex> pending_;   // spikes emitted on the previous step
    std::vector<NeuronIndex> emitted_;   // scratch
    std::vector<double> injection_;      // dense per-step scratch
    std::vector<NeuronState> state_view_;
};

} // namespace anisonet
