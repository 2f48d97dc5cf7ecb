#pragma once

#include <cstdint>
#include <vector>

#include "anisonet/grid.hpp"

namespace anisonet {

// The 8 lattice shift directions, ordered counter-clockwise by angle so that
// neighbouring rank bins map to neighbouring directions.
inline constexpr GridCoord kShiftDirections[8] = {
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
};

enum class ShiftMode {
    perlin,       // spatially correlated directions from gradient noise
    homogeneous,  // every neuron shifts along (1,0)
    random,       // independent uniform direction per neuron
};

// Per-excitatory-neuron preferred shift direction on the torus.
struct DirectionLandscape {
    std::vector<uint8_t> direction; // index into kShiftDirections, one per excitatory neuron
    int perlin_scale = 4;
    uint64_t seed = 0;

    GridCoord shift_of(NeuronIndex n) const { return kShiftDirections[direction[n]]; }
};

// Classic gradient noise with `cells` noise cells per axis, periodic on the
// torus. Gradients are seeded random unit vectors; interpolation uses the
// quintic fade. Values are in [-1, 1]-ish range (not normalized).
class PerlinField {
public:
    PerlinField(int cells, uint64_t seed);
    // x, y in grid units of a `side`-wide torus; the field repeats every side/cells units.
    double value(double x, double y, int side) const;

private:
    int cells_;
    std::vector<double> gx_, gy_; // cells x cells gradient table
};

// Assigns each excitatory neuron one of the 8 shift directions: Perlin noise
// sampled at the neuron position, rank-uniformized over all neurons, then cut
// into 8 equal-width bins.
DirectionLandscape build_landscape(const GridSpec& spec, int perlin_scale, uint64_t seed,
                                   ShiftMode mode = ShiftMode::perlin);

} // namespace anisonet
