#include <doctest.h>

#include <cmath>

#include "anisonet/landscape.hpp"
#include "anisonet/rng.hpp"

using namespace anisonet;

namespace {

double direction_cosine(const DirectionLandscape& landscape, NeuronIndex a, NeuronIndex b) {
    const GridCoord da = landscape.shift_of(a);
    const GridCoord db = landscape.shift_of(b);
    const double dot = da.x * db.x + da.y * db.y;
    const double na = std::sqrt(static_cast<double>(da.x * da.x + da.y * da.y));
    const double nb = std::sqrt(static_cast<double>(db.x * db.x + db.y * db.y));
    return dot / (na * nb);
}

// Mean direction cosine over sampled neuron pairs at a given torus distance,
// sampled over random displacement directions.
double mean_cosine_at_distance(const DirectionLandscape& landscape, const GridSpec& spec,
                               int distance, int pairs) {
    Rng rng(7);
    double acc = 0.0;
    int n = 0;
    while (n < pairs) {
        const GridCoord a{static_cast<int>(rng.uniform_int(spec.exc_side)),
                          static_cast<int>(rng.uniform_int(spec.exc_side))};
        const double theta = rng.uniform() * 2.0 * M_PI;
        const int dx = static_cast<int>(std::llround(distance * std::cos(theta)));
        const int dy = static_cast<int>(std::llround(distance * std::sin(theta)));
        if (dx == 0 && dy == 0) continue;
        const GridCoord b{wrap(a.x + dx, spec.exc_side), wrap(a.y + dy, spec.exc_side)};
        acc += direction_cosine(landscape, spec.exc_index(a), spec.exc_index(b));
        ++n;
    }
    return acc / pairs;
}

} // namespace

TEST_CASE("perlin field is periodic on the torus") {
    PerlinField field(4, 11);
    for (double x : {0.0, 7.3, 31.2}) {
        for (double y : {0.0, 3.9, 55.5}) {
            CHECK(field.value(x, y, 60) == doctest::Approx(field.value(x + 60.0, y, 60)).epsilon(1e-12));
            CHECK(field.value(x, y, 60) == doctest::Approx(field.value(x, y + 60.0, 60)).epsilon(1e-12));
        }
    }
}

TEST_CASE("landscape is deterministic in (seed, scale)") {
    GridSpec spec;
    const auto a = build_landscape(spec, 4, 42);
    const auto b = build_landscape(spec, 4, 42);
    CHECK(a.direction == b.direction);
    const auto c = build_landscape(spec, 4, 43);
    CHECK(a.direction != c.direction);
}

TEST_CASE("rank uniformization fills the 8 direction bins evenly") {
    GridSpec spec;
    const auto landscape = build_landscape(spec, 4, 42);
    int counts[8] = {0};
    for (uint8_t d : landscape.direction) ++counts[d];
    for (int bin = 0; bin < 8; ++bin) {
        CHECK(counts[bin] >= 442);
        CHECK(counts[bin] <= 458);
    }
}

TEST_CASE("direction similarity decays with torus distance") {
    GridSpec spec;
    const auto landscape = build_landscape(spec, 4, 42);
    const double c1 = mean_cosine_at_distance(landscape, spec, 1, 10000);
    const double c5 = mean_cosine_at_distance(landscape, spec, 5, 10000);
    const double c10 = mean_cosine_at_distance(landscape, spec, 10, 10000);
    const double c30 = mean_cosine_at_distance(landscape, spec, 30, 10000);
    CHECK(c1 > 0.8); // neighbours mostly share a bin or sit in adjacent ones
    CHECK(c1 > c5);
    CHECK(c5 > c30);
    CHECK(c1 > c30);
    // Far apart, directions are uncorrelated. Quantizing a scalar field onto
    // the direction circle leaves a small negative lobe at mid distances, so
    // only magnitudes are meaningful from here out.
    CHECK(std::abs(c10) < 0.15);
    CHECK(std::abs(c30) < 0.05);
}

TEST_CASE("homogeneous and random shift modes") {
    GridSpec spec;
    const auto homogeneous = build_landscape(spec, 4, 1, ShiftMode::homogeneous);
    for (uint8_t d : homogeneous.direction) CHECK(d == 0);
    CHECK(homogeneous.shift_of(0) == GridCoord{1, 0});

    const auto random = build_landscape(spec, 4, 1, ShiftMode::random);
    int counts[8] = {0};
    for (uint8_t d : random.direction) ++counts[d];
    for (int bin = 0; bin < 8; ++bin) CHECK(counts[bin] > 350); // ~450 expected
    CHECK(build_landscape(spec, 4, 1, ShiftMode::random).direction == random.direction);
}

TEST_CASE("perlin scale below 1 is rejected") {
    GridSpec spec;
    CHECK_THROWS(build_landscape(spec, 0, 1));
}
