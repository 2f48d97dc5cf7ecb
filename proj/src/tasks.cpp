#include "anisonet/tasks.hpp"

#include <algorithm>
#include <numeric>

#include "anisonet/errors.hpp"
#include "anisonet/savgol.hpp"

namespace anisonet {

std::string to_string(TaskKind kind) {
    return kind == TaskKind::representation ? "representation" : "generalisation";
}

std::string to_string(ReadoutMethod method) {
    return method == ReadoutMethod::ols_pooling ? "ols_pooling" : "elastic_net_excitatory";
}

TaskSpec TaskSpec::representation(int trial_count, int test_trial) {
    TaskSpec spec;
    spec.kind = TaskKind::representation;
    spec.train_trials.resize(trial_count);
    std::iota(spec.train_trials.begin(), spec.train_trials.end(), 0);
    spec.test_trial = test_trial;
    spec.validate(trial_count);
    return spec;
}

TaskSpec TaskSpec::generalisation(int trial_count, int held_out_trial) {
    TaskSpec spec;
    spec.kind = TaskKind::generalisation;
    for (int t = 0; t < trial_count; ++t)
        if (t != held_out_trial) spec.train_trials.push_back(t);
    spec.test_trial = held_out_trial;
    spec.validate(trial_count);
    return spec;
}

void TaskSpec::validate(int trial_count) const {
    if (test_trial < 0 || test_trial >= trial_count)
        throw ConfigError("task test trial out of range");
    for (int t : train_trials)
        if (t < 0 || t >= trial_count) throw ConfigError("task train trial out of range");
    const bool test_in_train =
        std::find(train_trials.begin(), train_trials.end(), test_trial) != train_trials.end();
    if (kind == TaskKind::representation &&
        (!test_in_train || static_cast<int>(train_trials.size()) != trial_count))
        throw ConfigError("representation task must train on all trials and test on one of them");
    if (kind == TaskKind::generalisation &&
        (test_in_train || static_cast<int>(train_trials.size()) != trial_count - 1))
        throw ConfigError("generalisation task must hold out exactly the test trial");
}

Eigen::Vector3d nrmse_per_dim(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target) {
    if (prediction.rows() != target.rows() || prediction.cols() != target.cols())
        throw NumericalError("nrmse: prediction and target shapes differ");
    Eigen::Vector3d out;
    for (int d = 0; d < 3; ++d) {
        const double range = target.col(d).maxCoeff() - target.col(d).minCoeff();
        if (range <= 0.0) throw NumericalError("nrmse: constant target dimension (zero range)");
        const double rmse =
            std::sqrt((prediction.col(d) - target.col(d)).squaredNorm() / target.rows());
        out[d] = rmse / range;
    }
    return out;
}

double nrmse(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target) {
    return nrmse_per_dim(prediction, target).mean();
}

TaskMetrics run_task(const TrialSet& trials, const Trajectory& trajectory, const TaskSpec& task,
                     ReadoutMethod method, const ElasticNetConfig& elastic_cfg,
                     const SmoothingParams& smoothing) {
    task.validate(trials.trial_count());
    const auto& features =
        trials.binned(method == ReadoutMethod::ols_pooling ? ReadoutSource::pooling
                                                           : ReadoutSource::excitatory);
    if (features.empty()) throw ConfigError("trial set lacks features for the requested readout");
    const Eigen::Index rows = features[0].rows();
    if (trajectory.samples.rows() != rows)
        throw ConfigError("trajectory sample count does not match the binned trial length");

    const auto [target_normalized, norm] = normalize(trajectory);

    Eigen::MatrixXd train_x(task.train_trials.size() * rows, features[0].cols());
    Eigen::MatrixXd train_y(task.train_trials.size() * rows, 3);
    for (size_t i = 0; i < task.train_trials.size(); ++i) {
        train_x.middleRows(i * rows, rows) = features[task.train_trials[i]];
        train_y.middleRows(i * rows, rows) = target_normalized.samples;
    }

    TaskMetrics metrics;
    metrics.trajectory = trajectory.name;
    metrics.kind = task.kind;
    metrics.method = method;
    if (method == ReadoutMethod::ols_pooling)
        metrics.model = fit_ols(train_x, train_y);
    else
        metrics.model = fit_elastic_net(train_x, train_y, elastic_cfg);

    const Eigen::MatrixXd predicted = metrics.model.predict(features[task.test_trial]);
    const Eigen::MatrixXd smoothed =
        savgol_smooth_columns(predicted, smoothing.window, smoothing.polyorder);

    Trajectory raw{trajectory.name, predicted, trajectory.rate_hz};
    Trajectory smooth{trajectory.name, smoothed, trajectory.rate_hz};
    metrics.prediction_raw = denormalize(raw, norm).samples;
    metrics.prediction_smoothed = denormalize(smooth, norm).samples;

    metrics.nrmse_raw_dim = nrmse_per_dim(metrics.prediction_raw, trajectory.samples);
    metrics.nrmse_smoothed_dim = nrmse_per_dim(metrics.prediction_smoothed, trajectory.samples);
    metrics.nrmse_raw = metrics.nrmse_raw_dim.mean();
    metrics.nrmse_smoothed = metrics.nrmse_smoothed_dim.mean();
    return metrics;
}

} // namespace anisonet
