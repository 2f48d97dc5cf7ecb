#include "anisonet/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "anisonet/rng.hpp"

namespace anisonet {

namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
double lerp(double a, double b, double w) { return a + (b - a) * w; }

} // namespace

PerlinField::PerlinField(int cells, uint64_t seed) : cells_(cells) {
    if (cells < 1) throw std::invalid_argument("PerlinField: cells must be >= 1");
    Rng rng(seed);
    gx_.resize(static_cast<size_t>(cells) * cells);
    gy_.resize(gx_.size());
    for (size_t i = 0; i < gx_.size(); ++i) {
        const double angle = rng.uniform() * 6.283185307179586476925286766559;
        gx_[i] = std::cos(angle);
        gy_[i] = std::sin(angle);
    }
}

double PerlinField::value(double x, double y, int side) const {
    // Map grid units to noise-cell units; the lattice wraps every cells_ cells.
    const double u = x * cells_ / side;
    const double v = y * cells_ / side;
    const int cx = static_cast<int>(std::floor(u));
    const int cy = static_cast<int>(std::floor(v));
    const double fx = u - cx;
    const double fy = v - cy;

    auto grad_dot = [&](int ix, int iy, double dx, double dy) {
        const int gxi = wrap(ix, cells_);
        const int gyi = wrap(iy, cells_);
        const size_t g = static_cast<size_t>(gyi) * cells_ + gxi;
        return gx_[g] * dx + gy_[g] * dy;
    };

    const double n00 = grad_dot(cx, cy, fx, fy);
    const double n10 = grad_dot(cx + 1, cy, fx - 1.0, fy);
    const double n01 = grad_dot(cx, cy + 1, fx, fy - 1.0);
    const double n11 = grad_dot(cx + 1, cy + 1, fx - 1.0, fy - 1.0);

    const double sx = fade(fx);
    const double sy = fade(fy);
    return lerp(lerp(n00, n10, sx), lerp(n01, n11, sx), sy);
}

DirectionLandscape build_landscape(const GridSpec& spec, int perlin_scale, uint64_t seed,
                                   ShiftMode mode) {
    spec.validate();
    if (perlin_scale < 1) throw std::invalid_argument("build_landscape: perlin_scale must be >= 1");

    const int n = spec.exc_count();
    DirectionLandscape landscape;
    landscape.perlin_scale = perlin_scale;
    landscape.seed = seed;
    landscape.direction.assign(n, 0);

    if (mode == ShiftMode::homogeneous) {
        return landscape; // direction 0 is (1,0)
    }
    if (mode == ShiftMode::random) {
        Rng rng(seed);
        for (int i = 0; i < n; ++i)
            landscape.direction[i] = static_cast<uint8_t>(rng.uniform_int(8));
        return landscape;
    }

    PerlinField field(perlin_scale, seed);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        const GridCoord c = spec.exc_coord(i);
        values[i] = field.value(c.x, c.y, spec.exc_side);
    }

    // Rank-uniformize: sort by value (index-stable on ties), then cut the rank
    // range into 8 equal bins. Bin occupancies are equal up to ties.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    for (int rank = 0; rank < n; ++rank) {
        const int bin = static_cast<int>((static_cast<int64_t>(rank) * 8) / n);
        landscape.direction[order[rank]] = static_cast<uint8_t>(bin);
    }
    return landscape;
}

} // namespace anisonet
