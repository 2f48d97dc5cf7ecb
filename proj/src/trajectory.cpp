#include "anisonet/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "anisonet/errors.hpp"
#include "anisonet/rng.hpp"

namespace anisonet {

void WaypointScript::validate() const {
    if (waypoints.size() < 2)
        throw ConfigError("script '" + name + "' needs at least two waypoints");
    if (waypoints.front().time_fraction != 0.0 || waypoints.back().time_fraction != 1.0)
        throw ConfigError("script '" + name + "' must span time fractions 0 to 1");
    for (size_t i = 1; i < waypoints.size(); ++i)
        if (waypoints[i].time_fraction <= waypoints[i - 1].time_fraction)
            throw ConfigError("script '" + name + "' time fractions must be strictly increasing");
}

const std::vector<WaypointScript>& builtin_scripts() {
    static const std::vector<WaypointScript> scripts = {
        {"hide",
         {{0.00, {0.45, -0.20, 0.40}},
          {0.35, {0.55, 0.02, 0.48}},
          {0.65, {0.62, 0.14, 0.34}},
          {1.00, {0.62, 0.16, 0.12}}}},
        {"unhide",
         {{0.00, {0.62, 0.16, 0.12}},
          {0.30, {0.60, 0.12, 0.38}},
          {0.70, {0.50, -0.08, 0.46}},
          {1.00, {0.44, -0.22, 0.36}}}},
        {"move_down",
         {{0.00, {0.52, 0.06, 0.55}},
          {0.45, {0.50, 0.01, 0.40}},
          {1.00, {0.48, -0.03, 0.14}}}},
        {"move_up",
         {{0.00, {0.48, -0.03, 0.14}},
          {0.55, {0.50, 0.02, 0.38}},
          {1.00, {0.53, 0.07, 0.56}}}},
        {"pick_and_place",
         {{0.00, {0.40, -0.25, 0.45}},
          {0.18, {0.40, -0.24, 0.16}},
          {0.34, {0.41, -0.22, 0.46}},
          {0.58, {0.60, 0.16, 0.50}},
          {0.78, {0.61, 0.18, 0.18}},
          {1.00, {0.62, 0.19, 0.44}}}},
        {"put_on_top",
         {{0.00, {0.38, 0.10, 0.30}},
          {0.35, {0.50, 0.16, 0.52}},
          {0.70, {0.60, 0.22, 0.44}},
          {1.00, {0.60, 0.24, 0.30}}}},
        {"take_down",
         {{0.00, {0.60, 0.24, 0.30}},
          {0.30, {0.58, 0.20, 0.48}},
          {0.62, {0.46, 0.04, 0.40}},
          {1.00, {0.40, -0.06, 0.14}}}},
    };
    return scripts;
}

const WaypointScript& builtin_script(const std::string& name) {
    for (const auto& script : builtin_scripts())
        if (script.name == name) return script;
    throw ConfigError("unknown trajectory name '" + name + "'");
}

namespace {

double min_jerk_blend(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

} // namespace

Trajectory generate(const WaypointScript& script, int samples, uint64_t jitter_seed,
                    double jitter_amplitude) {
    script.validate();
    if (samples < 2) throw ConfigError("trajectory needs at least 2 samples");

    std::vector<Waypoint> waypoints = script.waypoints;
    if (jitter_seed != 0 && jitter_amplitude > 0.0) {
        Rng rng(jitter_seed);
        for (size_t i = 1; i + 1 < waypoints.size(); ++i)
            for (int d = 0; d < 3; ++d)
                waypoints[i].point[d] += jitter_amplitude * rng.gaussian();
    }

    Trajectory out;
    out.name = script.name;
    out.samples.resize(samples, 3);
    size_t segment = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        while (segment + 2 < waypoints.size() && t > waypoints[segment + 1].time_fraction)
            ++segment;
        const auto& a = waypoints[segment];
        const auto& b = waypoints[segment + 1];
        const double s = (t - a.time_fraction) / (b.time_fraction - a.time_fraction);
        const double blend = min_jerk_blend(std::clamp(s, 0.0, 1.0));
        out.samples.row(i) = (a.point + blend * (b.point - a.point)).transpose();
    }
    return out;
}

Trajectory load_trajectory_csv(const std::string& path, int samples) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory file '" + path + "'");

    std::vector<double> times;
    std::vector<Eigen::Vector3d> points;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        if (row == 1 && line.find("t,") == 0) continue; // header
        std::stringstream ss(line);
        double values[4];
        std::string field;
        for (int f = 0; f < 4; ++f) {
            if (!std::getline(ss, field, ','))
                throw IoError(path + ": row " + std::to_string(row) + ": expected 4 fields");
            try {
                size_t used = 0;
                values[f] = std::stod(field, &used);
                while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
                    ++used;
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw IoError(path + ": row " + std::to_string(row) + ": non-numeric field '" +
                              field + "'");
            }
        }
        if (!times.empty() && values[0] <= times.back())
            throw IoError(path + ": row " + std::to_string(row) + ": time must increase");
        times.push_back(values[0]);
        points.emplace_back(values[1], values[2], values[3]);
    }
    if (times.size() < 2) throw IoError(path + ": need at least 2 data rows");

    Trajectory out;
    out.name = path;
    out.samples.resize(samples, 3);
    const double t0 = times.front(), t1 = times.back();
    size_t seg = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / (samples - 1);
        while (seg + 2 < times.size() && t > times[seg + 1]) ++seg;
        const double span = times[seg + 1] - times[seg];
        const double w = std::clamp((t - times[seg]) / span, 0.0, 1.0);
        out.samples.row(i) = ((1.0 - w) * points[seg] + w * points[seg + 1]).transpose();
    }
    return out;
}

void save_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory file '" + path + "'");
    out << "t,x,y,z\n";
    const int n = static_cast<int>(trajectory.samples.rows());
    char buf[160];
    for (int i = 0; i < n; ++i) {
        const double t = trajectory.rate_hz > 0 ? i / trajectory.rate_hz : i;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", t, trajectory.samples(i, 0),
                      trajectory.samples(i, 1), trajectory.samples(i, 2));
        out << buf;
    }
}

std::pair<Trajectory, Normalization> normalize(const Trajectory& trajectory) {
    Trajectory out = trajectory;
    Normalization norm;
    const Eigen::Index n = trajectory.samples.rows();
    for (int d = 0; d < 3; ++d) {
        const double mean = trajectory.samples.col(d).mean();
        const double var = (trajectory.samples.col(d).array() - mean).square().sum() / n;
        norm.mean[d] = mean;
        if (var < 1e-24) {
            norm.degenerate[d] = true;
            norm.scale[d] = 1.0;
        } else {
            norm.scale[d] = std::sqrt(var);
        }
        out.samples.col(d) = (trajectory.samples.col(d).array() - mean) / norm.scale[d];
    }
    return {out, norm};
}

Trajectory denormalize(const Trajectory& trajectory, const Normalization& normalization) {
    Trajectory out = trajectory;
    for (int d = 0; d < 3; ++d)
        out.samples.col(d) =
            trajectory.samples.col(d).array() * normalization.scale[d] + normalization.mean[d];
    return out;
}

} // namespace anisonet
