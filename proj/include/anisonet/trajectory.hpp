#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace anisonet {

// A 3D Cartesian target trajectory: `samples` rows of (x, y, z) in meters,
// uniformly sampled (200 rows = 2 s at 100 Hz).
struct Trajectory {
    std::string name;
    Eigen::MatrixXd samples; // rows x 3
    double rate_hz = 100.0;
};

struct Waypoint {
    double time_fraction; // in [0, 1], strictly increasing along a script
    Eigen::Vector3d point;
};

struct WaypointScript {
    std::string name;
    std::vector<Waypoint> waypoints;

    void validate() const;
};

// The seven built-in robot actions: hide, unhide, move_down, move_up,
// pick_and_place, put_on_top, take_down.
const std::vector<WaypointScript>& builtin_scripts();
const WaypointScript& builtin_script(const std::string& name);

// Minimum-jerk interpolation between consecutive waypoints (quintic blend per
// segment, zero boundary velocity/acceleration), sampled at `samples` uniform
// points. jitter_seed != 0 perturbs interior waypoints by Gaussian noise of
// the given amplitude before interpolation.
Trajectory generate(const WaypointScript& script, int samples = 200, uint64_t jitter_seed = 0,
                    double jitter_amplitude = 0.0);

// Parses rows (t, x, y, z) and linearly resamples to `samples` uniform points
// over [t_first, t_last]. Throws IoError naming the offending row.
Trajectory load_trajectory_csv(const std::string& path, int samples = 200);
void save_trajectory_csv(const std::string& path, const Trajectory& trajectory);

struct Normalization {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();
    std::array<bool, 3> degenerate{false, false, false}; // constant dimension, left unscaled
};

// Per-dimension affine map to zero mean, unit variance (constant dimensions
// are only mean-shifted and flagged).
std::pair<Trajectory, Normalization> normalize(const Trajectory& trajectory);
Trajectory denormalize(const Trajectory& trajectory, const Normalization& normalization);

} // namespace anisonet
