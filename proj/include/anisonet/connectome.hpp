#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "anisonet/grid.hpp"
#include "anisonet/landscape.hpp"

namespace anisonet {

// How the Gaussian axon profile is realized. polar_radius draws a uniform
// angle and a N(0, sigma) radius (density concentrated at the source, as in
// the locally-connected-network lineage this model descends from);
// gaussian2d draws independent N(0, sigma) offsets per axis (mass peaks in an
// annulus near r = sigma). The dynamics differ qualitatively: only the
// concentrated profile supports the propagating activity bumps.
enum class RadialProfile { polar_radius, gaussian2d };

struct ConnectivityParams {
    double sigma_exc = 12.0; // Gaussian space constant of excitatory axons (exc-frame grid units)
    double sigma_inh = 9.0;  // same for inhibitory axons
    double sigma_e2i = 0.0;  // E->I footprint override; 0 means use sigma_exc
    double p_conn = 0.05;    // sets out-degrees: floor(p*npop_E)=180, floor(p*npop_I)=45
    int n_shift = 1;         // E->E profile shift, in grid points along the landscape direction
    RadialProfile profile = RadialProfile::polar_radius;
    int32_t j_exc = 12;      // excitatory weight (Loihi units)
    int32_t j_inh = 48;      // inhibitory weight magnitude; applied with negative sign
    int32_t j_pool = 6;      // equal feed-forward weight onto pooling neurons

    int exc_out_degree(const GridSpec& spec) const {
        return static_cast<int>(p_conn * spec.exc_count());
    }
    int inh_out_degree(const GridSpec& spec) const {
        return static_cast<int>(p_conn * spec.inh_count());
    }
};

// Two interleaved 6x6 tilings of 10x10 patches, offset by (5,5); the union of
// patch origins per axis is {0,5,...,55}.
struct PoolingLayout {
    int window = 10;
    int stride = 5;
    std::vector<GridCoord> origins; // one per pooling neuron; grid A first, then grid B

    int neuron_count() const { return static_cast<int>(origins.size()); }
};

PoolingLayout build_pooling_layout(const GridSpec& spec);

// Members of one pooling patch (window x window block at the given origin, torus wrap).
std::vector<NeuronIndex> patch_members(const GridSpec& spec, GridCoord origin, int window);

// The 5x5 excitatory input block at the given origin (torus wrap), sorted.
std::vector<NeuronIndex> select_input_patch(const GridSpec& spec, GridCoord origin);

// Directed weighted graph over the full neuron set. Global indexing:
// excitatory [0, npop_E), inhibitory [npop_E, npop_E+npop_I), pooling after
// that. Immutable once built; safe to share read-only across threads.
class Connectome {
public:
    GridSpec spec;
    ConnectivityParams params;
    PoolingLayout pooling;             // empty origins if pooling not attached
    std::vector<NeuronIndex> input_patch;
    GridCoord input_origin{0, 0};
    uint64_t seed = 0;
    bool anisotropic = true;

    int exc_count() const { return spec.exc_count(); }
    int inh_count() const { return spec.inh_count(); }
    int pool_count() const { return pooling.neuron_count(); }
    int neuron_count() const { return exc_count() + inh_count() + pool_count(); }
    NeuronIndex inh_base() const { return exc_count(); }
    NeuronIndex pool_base() const { return exc_count() + inh_count(); }

    size_t edge_count() const { return targets_.size(); }

    std::span<const NeuronIndex> targets_of(NeuronIndex source) const {
        return {targets_.data() + offsets_[source], targets_.data() + offsets_[source + 1]};
    }
    std::span<const int32_t> weights_of(NeuronIndex source) const {
        return {weights_.data() + offsets_[source], weights_.data() + offsets_[source + 1]};
    }

    // Visits edges in canonical order (source asc, target asc). All delays are 1 step.
    void for_each_edge(const std::function<void(NeuronIndex, NeuronIndex, int32_t)>& fn) const;

    // Builds the CSR arrays from per-source adjacency; sorts targets per source.
    void assemble(std::vector<std::vector<std::pair<NeuronIndex, int32_t>>>& adjacency);

private:
    std::vector<size_t> offsets_;      // neuron_count()+1
    std::vector<NeuronIndex> targets_;
    std::vector<int32_t> weights_;
};

// Anisotropic EI connectome: Gaussian local targets, E->E centers shifted by
// n_shift grid points along each source's landscape direction. Exact
// out-degrees, no self-edges, no duplicates. Throws ConfigError if the
// Gaussian is too narrow to reach the required out-degree.
Connectome build_anisotropic(const GridSpec& spec, const DirectionLandscape& landscape,
                             const ConnectivityParams& params, uint64_t seed);

// Random control of equal size: same out-degrees, weights and delays, targets
// uniform over each population.
Connectome build_random_control(const GridSpec& spec, const ConnectivityParams& params,
                                uint64_t seed);

// Wires the 72 pooling neurons (equal-weight all-to-one from each 10x10 patch)
// into an assembled connectome.
void attach_pooling(Connectome& net);

// Installs the 5x5 input patch at the given origin.
void set_input_patch(Connectome& net, GridCoord origin);

} // namespace anisonet
