#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anisonet {

using NeuronIndex = int32_t;

struct GridCoord {
    int x = 0;
    int y = 0;
    bool operator==(const GridCoord&) const = default;
};

// Two square sheets folded to a torus: a 60x60 excitatory grid and a 30x30
// inhibitory grid interleaved on the same surface. Inhibitory neuron (ix,iy)
// sits at excitatory-frame position (2*ix+1, 2*iy+1).
struct GridSpec {
    int exc_side = 60;
    int inh_side = 30;

    int exc_count() const { return exc_side * exc_side; }
    int inh_count() const { return inh_side * inh_side; }

    void validate() const {
        if (exc_side <= 0 || inh_side <= 0)
            throw std::invalid_argument("GridSpec: sides must be positive");
        if (exc_side != 2 * inh_side)
            throw std::invalid_argument("GridSpec: exc_side must equal 2*inh_side, got " +
                                        std::to_string(exc_side) + " vs " + std::to_string(inh_side));
    }

    GridCoord exc_coord(NeuronIndex n) const { return {static_cast<int>(n) % exc_side, static_cast<int>(n) / exc_side}; }
    NeuronIndex exc_index(GridCoord c) const { return static_cast<NeuronIndex>(c.y * exc_side + c.x); }
    GridCoord inh_coord(NeuronIndex n) const { return {static_cast<int>(n) % inh_side, static_cast<int>(n) / inh_side}; }
    NeuronIndex inh_index(GridCoord c) const { return static_cast<NeuronIndex>(c.y * inh_side + c.x); }

    // Inhibitory grid coordinate mapped onto the excitatory frame.
    GridCoord inh_to_exc_frame(GridCoord c) const { return {2 * c.x + 1, 2 * c.y + 1}; }
};

inline int wrap(int v, int side) {
    v %= side;
    return v < 0 ? v + side : v;
}

// Signed per-axis difference folded to the minimal image, in (-side/2, side/2].
inline int wrap_delta(int delta, int side) {
    delta %= side;
    if (delta > side / 2) delta -= side;
    if (delta <= -((side + 1) / 2)) delta += side;
    return delta;
}

inline double torus_distance(GridCoord a, GridCoord b, int side) {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    const int wx = std::min(dx, side - dx);
    const int wy = std::min(dy, side - dy);
    return std::sqrt(static_cast<double>(wx) * wx + static_cast<double>(wy) * wy);
}

} // namespace anisonet
