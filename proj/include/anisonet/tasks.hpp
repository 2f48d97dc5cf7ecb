#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "anisonet/protocol.hpp"
#include "anisonet/regression.hpp"
#include "anisonet/trajectory.hpp"

namespace anisonet {

enum class TaskKind { representation, generalisation };
enum class ReadoutMethod { ols_pooling, elastic_net_excitatory };

std::string to_string(TaskKind kind);
std::string to_string(ReadoutMethod method);

struct TaskSpec {
    TaskKind kind = TaskKind::representation;
    std::vector<int> train_trials;
    int test_trial = 0;

    // representation: train on all trials, test on one of them;
    // generalisation: train on the others, test on the held-out trial.
    static TaskSpec representation(int trial_count, int test_trial);
    static TaskSpec generalisation(int trial_count, int held_out_trial);
    void validate(int trial_count) const;
};

// RMSE normalized by the per-dimension target range, averaged over dimensions.
// Throws NumericalError for a constant target dimension.
double nrmse(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target);
Eigen::Vector3d nrmse_per_dim(const Eigen::MatrixXd& prediction, const Eigen::MatrixXd& target);

struct SmoothingParams {
    int window = 21;
    int polyorder = 1;
};

struct TaskMetrics {
    std::string trajectory;
    TaskKind kind;
    ReadoutMethod method;
    double nrmse_smoothed = 0.0;          // primary score (after Savitzky-Golay)
    double nrmse_raw = 0.0;
    Eigen::Vector3d nrmse_smoothed_dim = Eigen::Vector3d::Zero();
    Eigen::Vector3d nrmse_raw_dim = Eigen::Vector3d::Zero();
    ReadoutModel model;
    Eigen::MatrixXd prediction_raw;       // denormalized, samples x 3
    Eigen::MatrixXd prediction_smoothed;
};

// Fits the readout on the train trials' binned features against the (shared)
// target trajectory, predicts the test trial, smooths, and scores.
TaskMetrics run_task(const TrialSet& trials, const Trajectory& trajectory, const TaskSpec& task,
                     ReadoutMethod method, const ElasticNetConfig& elastic_cfg = {},
                     const SmoothingParams& smoothing = {});

} // namespace anisonet
