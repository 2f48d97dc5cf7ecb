#pragma once

#include <cstdint>

#include "anisonet/errors.hpp"

namespace anisonet {

enum class DecayMode {
    loihi,     // per-step factor (4096 - delta) / 4096
    tau_steps, // delta read as a time constant in steps: factor exp(-1/delta)
};

// Loihi-style discrete-time LIF parameters, in Loihi units.
struct NeuronParams {
    int32_t v_th = 64000;
    int32_t decay_current = 380;  // delta_I
    int32_t decay_voltage = 400;  // delta_v
    int32_t t_ref = 2;            // refractory period, steps
    int32_t i_bias = 0;
    int32_t weight_multiplier = 64; // synaptic event adds weight * multiplier to the current
    DecayMode decay_mode = DecayMode::loihi;

    void validate() const {
        if (v_th <= 0) throw ConfigError("v_th must be positive");
        if (decay_current < 0 || decay_current > 4096)
            throw ConfigError("current decay must be in [0, 4096]");
        if (decay_voltage < 0 || decay_voltage > 4096)
            throw ConfigError("voltage decay must be in [0, 4096]");
        if (t_ref < 0) throw ConfigError("t_ref must be >= 0");
        if (weight_multiplier <= 0) throw ConfigError("weight_multiplier must be positive");
    }

    double current_factor() const { return factor(decay_current); }
    double voltage_factor() const { return factor(decay_voltage); }

private:
    double factor(int32_t delta) const {
        if (decay_mode == DecayMode::loihi) return (4096.0 - delta) / 4096.0;
        return delta == 0 ? 0.0 : std::exp(-1.0 / delta);
    }
};

// Per-neuron dynamic state. v is held at 0 while the refractory counter runs.
struct NeuronState {
    double v = 0.0;
    double current = 0.0;
    int32_t refractory_remaining = 0;
};

} // namespace anisonet
