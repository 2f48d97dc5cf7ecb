#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace anisonet {

// Savitzky-Golay smoothing: each point becomes the value at its own abscissa
// of the least-squares polynomial fitted over the covering window. Edge
// points use the one-sided truncated window, so the output length equals the
// input length. Window must be odd and larger than the polynomial order.
std::vector<double> savgol_smooth(std::span<const double> series, int window = 21,
                                  int polyorder = 1);

// Column-wise variant.
Eigen::MatrixXd savgol_smooth_columns(const Eigen::MatrixXd& series, int window = 21,
                                      int polyorder = 1);

} // namespace anisonet
