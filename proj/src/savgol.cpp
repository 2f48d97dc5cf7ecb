#include "anisonet/savgol.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "anisonet/errors.hpp"

namespace anisonet {

std::vector<double> savgol_smooth(std::span<const double> series, int window, int polyorder) {
    if (window % 2 == 0) throw ConfigError("savgol window must be odd");
    if (window <= polyorder) throw ConfigError("savgol window must exceed the polynomial order");
    if (polyorder < 0) throw ConfigError("savgol polyorder must be >= 0");

    const int n = static_cast<int>(series.size());
    const int half = window / 2;
    std::vector<double> out(series.size());

    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        const int m = hi - lo + 1;
        const int order = std::min(polyorder, m - 1);

        // Least-squares polynomial in (j - i); the smoothed value is the
        // constant coefficient.
        Eigen::MatrixXd vand(m, order + 1);
        Eigen::VectorXd rhs(m);
        for (int r = 0; r < m; ++r) {
            const double x = (lo + r) - i;
            double pw = 1.0;
            for (int c = 0; c <= order; ++c) {
                vand(r, c) = pw;
                pw *= x;
            }
            rhs[r] = series[lo + r];
        }
        const Eigen::VectorXd coeff = vand.colPivHouseholderQr().solve(rhs);
        out[i] = coeff[0];
    }
    return out;
}

Eigen::MatrixXd savgol_smooth_columns(const Eigen::MatrixXd& series, int window, int polyorder) {
    Eigen::MatrixXd out(series.rows(), series.cols());
    std::vector<double> column(series.rows());
    for (Eigen::Index c = 0; c < series.cols(); ++c) {
        for (Eigen::Index r = 0; r < series.rows(); ++r) column[r] = series(r, c);
        const auto smoothed = savgol_smooth(column, window, polyorder);
        for (Eigen::Index r = 0; r < series.rows(); ++r) out(r, c) = smoothed[r];
    }
    return out;
}

} // namespace anisonet
