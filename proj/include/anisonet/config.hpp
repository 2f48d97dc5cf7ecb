#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisonet/connectome.hpp"
#include "anisonet/neuron.hpp"
#include "anisonet/protocol.hpp"
#include "anisonet/regression.hpp"
#include "anisonet/tasks.hpp"

namespace anisonet {

enum class NetworkChoice { anisotropic, random, both };

// All run parameters, loaded from a key = value config file with sections
// mirroring the model parameter table. Science parameters live here; command
// line flags only carry paths and verbosity.
struct RunConfig {
    // [network]
    GridSpec grid;
    ConnectivityParams connectivity;
    int perlin_scale = 4;
    ShiftMode shift_mode = ShiftMode::perlin;
    NetworkChoice network = NetworkChoice::both;
    GridCoord input_origin{20, 20};
    uint64_t seed = 1;

    // [loihi]
    NeuronParams neuron;                    // weight_multiplier applies to the anisotropic net
    int32_t weight_multiplier_random = 64;  // the random control is calibrated separately

    // [protocol]
    int record_steps = 215;
    int gap_steps = 30;
    int drop_head = 5;
    int bin_width = 10;
    int samples_per_trial = 200;

    // [readout]
    ReadoutSource readout_source = ReadoutSource::pooling;
    ElasticNetConfig elastic;
    SmoothingParams smoothing;

    // [tasks]
    std::vector<std::string> trajectories;
    int representation_test_trial = 0;
    int generalisation_test_trial = 0;
    uint64_t trajectory_jitter_seed = 0;
    double trajectory_jitter_amplitude = 0.0;

    // [analysis]
    int plateau_begin = 100; // first step of the settled regime used for rate/Fano summaries

    // [output]
    std::string output_dir; // empty -> $ANISONET_OUT or "out"

    NeuronParams neuron_params_for(NetworkChoice kind) const {
        NeuronParams p = neuron;
        if (kind == NetworkChoice::random) p.weight_multiplier = weight_multiplier_random;
        return p;
    }

    void validate() const;

    // Canonical serialization (fixed key order) and its FNV-1a hash; manifests
    // embed the hash so artifacts can be matched to the producing config.
    std::string canonical_text() const;
    uint64_t config_hash() const;

    static RunConfig from_file(const std::string& path);
    static RunConfig defaults();
};

uint64_t fnv1a_hash(const std::string& text);

std::string resolve_output_dir(const RunConfig& cfg, const std::string& cli_override);

} // namespace anisonet
