#include <doctest.h>

#include <vector>

#include "anisonet/errors.hpp"
#include "anisonet/savgol.hpp"

using namespace anisonet;

TEST_CASE("order-1 filter reproduces linear series exactly, edges included") {
    std::vector<double> series(200);
    for (int i = 0; i < 200; ++i) series[i] = 3.5 - 0.125 * i;
    const auto smoothed = savgol_smooth(series, 21, 1);
    for (int i = 0; i < 200; ++i)
        CHECK(smoothed[i] == doctest::Approx(series[i]).epsilon(1e-12));
}

TEST_CASE("interior output equals the width-21 moving average") {
    std::vector<double> series(200);
    for (int i = 0; i < 200; ++i) series[i] = std::sin(0.21 * i) + 0.3 * std::cos(1.7 * i);
    const auto smoothed = savgol_smooth(series, 21, 1);
    for (int i = 10; i < 190; ++i) {
        double mean = 0.0;
        for (int j = i - 10; j <= i + 10; ++j) mean += series[j];
        mean /= 21.0;
        CHECK(smoothed[i] == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("unit impulse spreads 1/21 over the covering interior windows") {
    std::vector<double> series(200, 0.0);
    series[100] = 1.0;
    const auto smoothed = savgol_smooth(series, 21, 1);
    for (int i = 20; i < 180; ++i) {
        const double expected = (std::abs(i - 100) <= 10) ? 1.0 / 21.0 : 0.0;
        CHECK(smoothed[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("quadratic series pass through an order-2 filter") {
    std::vector<double> series(60);
    for (int i = 0; i < 60; ++i) series[i] = 0.02 * i * i - 0.4 * i + 1.0;
    const auto smoothed = savgol_smooth(series, 11, 2);
    for (int i = 0; i < 60; ++i)
        CHECK(smoothed[i] == doctest::Approx(series[i]).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
    std::vector<double> series(50, 1.0);
    CHECK_THROWS_AS(savgol_smooth(series, 20, 1), ConfigError);
    CHECK_THROWS_AS(savgol_smooth(series, 3, 3), ConfigError);
    CHECK_THROWS_AS(savgol_smooth(series, 3, -1), ConfigError);
}

TEST_CASE("column-wise smoothing matches the per-series filter") {
    Eigen::MatrixXd m(50, 2);
    std::vector<double> col(50);
    for (int i = 0; i < 50; ++i) {
        m(i, 0) = std::sin(0.3 * i);
        m(i, 1) = i * 0.5;
        col[i] = m(i, 0);
    }
    const auto smoothed = savgol_smooth_columns(m, 21, 1);
    const auto direct = savgol_smooth(col, 21, 1);
    for (int i = 0; i < 50; ++i) {
        CHECK(smoothed(i, 0) == doctest::Approx(direct[i]).epsilon(1e-12));
        CHECK(smoothed(i, 1) == doctest::Approx(m(i, 1)).epsilon(1e-12));
    }
}
