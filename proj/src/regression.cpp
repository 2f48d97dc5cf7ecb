#include "anisonet/regression.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "anisonet/errors.hpp"

namespace anisonet {

namespace {

struct Standardized {
    Eigen::MatrixXd matrix;     // columns with scale 0 left centered but unscaled
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;      // population std; 0 marks a constant column
};

Standardized standardize_columns(const Eigen::MatrixXd& features) {
    Standardized s;
    const auto n = features.rows();
    s.mean = features.colwise().mean();
    s.matrix = features.rowwise() - s.mean.transpose();
    s.scale = (s.matrix.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt();
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
        if (s.scale[j] > 0.0) s.matrix.col(j) /= s.scale[j];
    }
    return s;
}

} // namespace

Eigen::MatrixXd ReadoutModel::predict(const Eigen::MatrixXd& features) const {
    return (features * weights).rowwise() + intercept.transpose();
}

ReadoutModel fit_ols(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets) {
    if (features.rows() != targets.rows())
        throw NumericalError("fit_ols: feature and target row counts differ");
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();

    Eigen::MatrixXd design(n, p + 1);
    design.col(0).setOnes();
    const Eigen::RowVectorXd mean = features.colwise().mean();
    design.rightCols(p) = features.rowwise() - mean;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    const Eigen::MatrixXd coeffs = cod.solve(targets);

    ReadoutModel model;
    model.weights = coeffs.bottomRows(p);
    model.intercept = coeffs.row(0).transpose() - model.weights.transpose() * mean.transpose();
    model.rank_deficient = cod.rank() < p + 1;
    return model;
}

void ElasticNetConfig::validate() const {
    if (alpha < 0.0) throw ConfigError("elastic net alpha must be >= 0");
    if (l1_ratio < 0.0 || l1_ratio > 1.0) throw ConfigError("elastic net l1_ratio must be in [0, 1]");
    if (max_iter < 1) throw ConfigError("elastic net max_iter must be >= 1");
    if (tol <= 0.0) throw ConfigError("elastic net tol must be positive");
}

ReadoutModel fit_elastic_net(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                             const ElasticNetConfig& cfg) {
    cfg.validate();
    if (features.rows() != targets.rows())
        throw NumericalError("fit_elastic_net: feature and target row counts differ");
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    const Eigen::Index outputs = targets.cols();

    Standardized s = standardize_columns(features);
    const Eigen::RowVectorXd target_mean = targets.colwise().mean();

    Eigen::VectorXd col_sq(p);
    for (Eigen::Index j = 0; j < p; ++j) col_sq[j] = s.matrix.col(j).squaredNorm();

    const double threshold = cfg.alpha * cfg.l1_ratio / 2.0;
    const double ridge = cfg.alpha * (1.0 - cfg.l1_ratio);

    ReadoutModel model;
    model.standardized_weights = Eigen::MatrixXd::Zero(p, outputs);
    model.feature_mean = s.mean;
    model.feature_scale = s.scale;
    model.converged = true;
    model.iterations = 0;

    Eigen::VectorXd residual(n);
    for (Eigen::Index d = 0; d < outputs; ++d) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        residual = targets.col(d).array() - target_mean[d];

        int iter = 0;
        bool this_converged = false;
        for (; iter < cfg.max_iter; ++iter) {
            double max_delta = 0.0;
            for (Eigen::Index j = 0; j < p; ++j) {
                if (s.scale[j] <= 0.0) continue;
                const double bj = beta[j];
                const double z = s.matrix.col(j).dot(residual) + col_sq[j] * bj;
                double bn = 0.0;
                if (z > threshold)
                    bn = (z - threshold) / (col_sq[j] + ridge);
                else if (z < -threshold)
                    bn = (z + threshold) / (col_sq[j] + ridge);
                if (bn != bj) {
                    residual.noalias() -= s.matrix.col(j) * (bn - bj);
                    beta[j] = bn;
                    max_delta = std::max(max_delta, std::abs(bn - bj));
                }
            }
            // Refresh the residual periodically; incremental updates drift.
            if ((iter + 1) % 64 == 0)
                residual = (targets.col(d).array() - target_mean[d]).matrix() - s.matrix * beta;
            if (max_delta < cfg.tol) {
                this_converged = true;
                ++iter;
                break;
            }
        }
        model.iterations = std::max(model.iterations, iter);
        if (!this_converged) model.converged = false;
        model.standardized_weights.col(d) = beta;
    }

    // Map back to the original feature space.
    model.weights = Eigen::MatrixXd::Zero(p, outputs);
    for (Eigen::Index j = 0; j < p; ++j) {
        if (s.scale[j] > 0.0)
            model.weights.row(j) = model.standardized_weights.row(j) / s.scale[j];
    }
    model.intercept = target_mean.transpose() - model.weights.transpose() * s.mean;
    return model;
}

double elastic_net_kkt_residual(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                const ReadoutModel& model, const ElasticNetConfig& cfg) {
    Standardized s = standardize_columns(features);
    const Eigen::RowVectorXd target_mean = targets.colwise().mean();
    const double l1 = cfg.alpha * cfg.l1_ratio;
    const double ridge = cfg.alpha * (1.0 - cfg.l1_ratio);

    double worst = 0.0;
    for (Eigen::Index d = 0; d < targets.cols(); ++d) {
        const Eigen::VectorXd beta = model.standardized_weights.col(d);
        const Eigen::VectorXd residual =
            (targets.col(d).array() - target_mean[d]).matrix() - s.matrix * beta;
        for (Eigen::Index j = 0; j < features.cols(); ++j) {
            if (s.scale[j] <= 0.0) continue;
            const double grad = -2.0 * s.matrix.col(j).dot(residual) + 2.0 * ridge * beta[j];
            double violation;
            if (beta[j] == 0.0)
                violation = std::max(0.0, std::abs(grad) - l1);
            else
                violation = std::abs(grad + l1 * (beta[j] > 0 ? 1.0 : -1.0));
            worst = std::max(worst, violation);
        }
    }
    return worst;
}

} // namespace anisonet
