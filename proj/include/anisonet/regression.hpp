#pragma once

#include <Eigen/Core>

namespace anisonet {

// Linear readout: prediction = features * weights + intercept (per output).
struct ReadoutModel {
    Eigen::VectorXd intercept;  // outputs
    Eigen::MatrixXd weights;    // features x outputs
    bool rank_deficient = false;

    // Elastic-net diagnostics (empty for OLS fits). Coefficients live in the
    // standardized feature space actually optimized; feature_scale == 0 marks
    // constant columns that were excluded from the fit.
    Eigen::MatrixXd standardized_weights;
    Eigen::VectorXd feature_mean;
    Eigen::VectorXd feature_scale;
    bool converged = true;
    int iterations = 0;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& features) const;
};

// Least squares with intercept, solved by a rank-revealing complete
// orthogonal decomposition (minimum-norm solution when rank deficient, with
// the rank_deficient flag set). Features are centered internally so the
// intercept stays identifiable.
ReadoutModel fit_ols(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets);

struct ElasticNetConfig {
    double alpha = 0.001;   // overall penalty strength
    double l1_ratio = 0.05; // balance between the L1 and L2 terms
    int max_iter = 500;
    double tol = 1e-6;      // max coefficient change per sweep, standardized scale

    void validate() const;
};

// Coordinate-descent minimizer of
//   ||y - X b||^2 + alpha * ((1 - l1_ratio) ||b||^2 + l1_ratio ||b||_1)
// per output dimension, on column-standardized features with an unpenalized
// intercept. Returned weights/intercept are mapped back to the original
// feature space. Non-convergence returns the last iterate with
// converged = false.
ReadoutModel fit_elastic_net(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                             const ElasticNetConfig& cfg);

// Max KKT violation of the elastic-net stationarity conditions for a fit, in
// the standardized space: |2 x_j.r| - alpha*l1_ratio for zero coefficients
// (clamped at 0), stationarity residual for active ones.
double elastic_net_kkt_residual(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                                const ReadoutModel& model, const ElasticNetConfig& cfg);

} // namespace anisonet
