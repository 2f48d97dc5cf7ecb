#include "anisonet/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "anisonet/errors.hpp"
#include "anisonet/rng.hpp"

namespace anisonet {

namespace {

void clamp_window(const SpikeRaster& raster, int& step_begin, int& step_end) {
    if (step_end < 0) step_end = raster.steps();
    if (step_begin < 0 || step_begin >= step_end || step_end > raster.steps())
        throw NumericalError("invalid step window for raster statistics");
}

double population_variance(std::span<const double> xs, double mean) {
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

} // namespace

double mean_firing_rate(const SpikeRaster& raster, int neuron_end, int step_begin, int step_end) {
    clamp_window(raster, step_begin, step_end);
    int64_t spikes = 0;
    for (int s = step_begin; s < step_end; ++s) spikes += raster.population_count(s, neuron_end);
    return static_cast<double>(spikes) /
           (static_cast<double>(step_end - step_begin) * neuron_end);
}

std::vector<double> group_rates(const SpikeRaster& raster, const GridSpec& spec) {
    const int tiles = spec.exc_side / 10;
    std::vector<int64_t> counts(static_cast<size_t>(tiles) * tiles, 0);
    for (int n = 0; n < spec.exc_count(); ++n) {
        const GridCoord c = spec.exc_coord(n);
        const int group = (c.y / 10) * tiles + (c.x / 10);
        counts[group] += raster.neuron_spike_count(n);
    }
    std::vector<double> rates(counts.size());
    const double denom = static_cast<double>(raster.steps()) * 100.0;
    for (size_t g = 0; g < counts.size(); ++g) rates[g] = counts[g] / denom;
    return rates;
}

double fano_factor(std::span<const double> counts) {
    if (counts.empty()) throw NumericalError("fano_factor: empty count series");
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
    if (mean == 0.0) return 0.0;
    return population_variance(counts, mean) / mean;
}

double population_count_fano(const SpikeRaster& raster, int neuron_end, int step_begin,
                             int step_end) {
    clamp_window(raster, step_begin, step_end);
    std::vector<double> counts;
    counts.reserve(step_end - step_begin);
    for (int s = step_begin; s < step_end; ++s)
        counts.push_back(raster.population_count(s, neuron_end));
    return fano_factor(counts);
}

double mean_binary_fano(const SpikeRaster& raster, int neuron_end, int step_begin, int step_end) {
    clamp_window(raster, step_begin, step_end);
    const double steps = step_end - step_begin;
    double sum = 0.0;
    int active = 0;
    for (int n = 0; n < neuron_end; ++n) {
        int c = 0;
        for (int s = step_begin; s < step_end; ++s) c += raster.get(s, n);
        if (c == 0) continue;
        const double p = c / steps;
        sum += 1.0 - p; // var/mean of a 0/1 series
        ++active;
    }
    if (active == 0) throw NumericalError("mean_binary_fano: no active neurons in window");
    return sum / active;
}

PairwiseDifferences pairwise_differences(std::span<const SpikeRaster> rasters, int neuron_end) {
    if (rasters.size() < 2) throw NumericalError("pairwise_differences: need at least two trials");
    const int steps = rasters[0].steps();
    PairwiseDifferences out;
    out.mean.resize(steps);
    out.std.resize(steps);
    std::vector<double> values;
    values.reserve(rasters.size() * (rasters.size() - 1) / 2);
    for (int s = 0; s < steps; ++s) {
        values.clear();
        for (size_t i = 0; i < rasters.size(); ++i)
            for (size_t j = i + 1; j < rasters.size(); ++j)
                values.push_back(hamming_at_step(rasters[i], rasters[j], s, neuron_end) /
                                 static_cast<double>(neuron_end));
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        out.mean[s] = mean;
        out.std[s] = std::sqrt(population_variance(values, mean));
    }
    return out;
}

std::vector<double> pairwise_differences_at(std::span<const SpikeRaster> rasters, int neuron_end,
                                            int step) {
    std::vector<double> values;
    values.reserve(rasters.size() * (rasters.size() - 1) / 2);
    for (size_t i = 0; i < rasters.size(); ++i)
        for (size_t j = i + 1; j < rasters.size(); ++j)
            values.push_back(hamming_at_step(rasters[i], rasters[j], step, neuron_end) /
                             static_cast<double>(neuron_end));
    return values;
}

namespace {

// Orthogonal (block power) iteration with Rayleigh-Ritz refinement; used when
// the feature count makes a full eigendecomposition wasteful.
void top_eigenpairs_iterative(const Eigen::MatrixXd& cov, int k, Eigen::MatrixXd& vectors,
                              Eigen::VectorXd& values) {
    const Eigen::Index p = cov.rows();
    const int block = std::min<Eigen::Index>(p, k + 8);
    Rng rng(0x9ca0705u);
    Eigen::MatrixXd basis(p, block);
    for (Eigen::Index i = 0; i < p; ++i)
        for (int j = 0; j < block; ++j) basis(i, j) = rng.gaussian();
    basis = Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() *
            Eigen::MatrixXd::Identity(p, block);

    Eigen::VectorXd previous = Eigen::VectorXd::Zero(k);
    for (int iter = 0; iter < 1000; ++iter) {
        Eigen::MatrixXd product = cov * basis;
        basis = Eigen::HouseholderQR<Eigen::MatrixXd>(product).householderQ() *
                Eigen::MatrixXd::Identity(p, block);
        const Eigen::MatrixXd small = basis.transpose() * cov * basis;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
        // Ascending order from Eigen; rotate so columns follow descending eigenvalues.
        Eigen::MatrixXd rotation(block, block);
        Eigen::VectorXd current(k);
        for (int j = 0; j < block; ++j) rotation.col(j) = es.eigenvectors().col(block - 1 - j);
        basis = basis * rotation;
        for (int j = 0; j < k; ++j) current[j] = es.eigenvalues()[block - 1 - j];
        const double change = (current - previous).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, current.cwiseAbs().maxCoeff());
        previous = current;
        if (change < 1e-11 * scale && iter > 2) break;
    }
    vectors = basis.leftCols(k);
    values = previous;
}

} // namespace

PcaResult pca_project(std::span<const Eigen::MatrixXd> trials, int k) {
    if (trials.empty()) throw NumericalError("pca_project: no trials");
    const Eigen::Index p = trials[0].cols();
    if (k < 1 || k > p) throw NumericalError("pca_project: invalid component count");

    Eigen::Index total_rows = 0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    for (const auto& t : trials) {
        mean += t.colwise().sum().transpose();
        total_rows += t.rows();
    }
    if (total_rows < 2) throw NumericalError("pca_project: not enough rows");
    mean /= static_cast<double>(total_rows);

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
    for (const auto& t : trials) {
        const Eigen::MatrixXd centered = t.rowwise() - mean.transpose();
        cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0);
    }
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= static_cast<double>(total_rows - 1);

    PcaResult result;
    result.mean = mean;
    result.total_variance = cov.trace();
    if (p <= 256 || k > p / 4) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        result.components.resize(p, k);
        result.explained_variance.resize(k);
        for (int j = 0; j < k; ++j) {
            result.components.col(j) = es.eigenvectors().col(p - 1 - j);
            result.explained_variance[j] = es.eigenvalues()[p - 1 - j];
        }
    } else {
        top_eigenpairs_iterative(cov, k, result.components, result.explained_variance);
    }

    result.projections.reserve(trials.size());
    for (const auto& t : trials)
        result.projections.push_back((t.rowwise() - mean.transpose()) * result.components);
    return result;
}

Pc1Stats pc1_statistics(std::span<const Eigen::MatrixXd> projections) {
    if (projections.size() < 2) throw NumericalError("pc1_statistics: need at least two trials");
    const Eigen::Index rows = projections[0].rows();
    const size_t trials = projections.size();

    double variance_sum = 0.0;
    for (const auto& proj : projections) {
        const auto pc1 = proj.col(0);
        const double mean = pc1.mean();
        variance_sum += (pc1.array() - mean).square().sum() / rows;
    }
    const double normalizer = variance_sum / static_cast<double>(trials);

    Pc1Stats stats;
    for (size_t i = 0; i < trials; ++i) {
        for (size_t j = i + 1; j < trials; ++j) {
            const double mse =
                (projections[i].col(0) - projections[j].col(0)).squaredNorm() / rows;
            stats.pair_mse.push_back(normalizer > 0.0 ? mse / normalizer : 0.0);
        }
    }
    stats.normalized_mse = std::accumulate(stats.pair_mse.begin(), stats.pair_mse.end(), 0.0) /
                           stats.pair_mse.size();

    stats.step_std.resize(rows);
    std::vector<double> at_step(trials);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (size_t i = 0; i < trials; ++i) at_step[i] = projections[i](r, 0);
        const double mean = std::accumulate(at_step.begin(), at_step.end(), 0.0) / trials;
        stats.step_std[r] = std::sqrt(population_variance(at_step, mean));
    }
    stats.mean_step_std = std::accumulate(stats.step_std.begin(), stats.step_std.end(), 0.0) /
                          stats.step_std.size();
    return stats;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

TestResult levene(const std::vector<std::vector<double>>& samples) {
    const size_t k = samples.size();
    if (k < 2) throw NumericalError("levene: need at least two groups");
    for (const auto& group : samples)
        if (group.size() < 3) throw NumericalError("levene: each group needs at least 3 samples");

    size_t total = 0;
    std::vector<std::vector<double>> deviations(k);
    for (size_t g = 0; g < k; ++g) {
        const auto& xs = samples[g];
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        deviations[g].reserve(xs.size());
        for (double x : xs) deviations[g].push_back(std::abs(x - mean));
        total += xs.size();
    }

    double grand = 0.0;
    std::vector<double> group_mean(k);
    for (size_t g = 0; g < k; ++g) {
        group_mean[g] =
            std::accumulate(deviations[g].begin(), deviations[g].end(), 0.0) / deviations[g].size();
        grand += group_mean[g] * deviations[g].size();
    }
    grand /= static_cast<double>(total);

    double between = 0.0, within = 0.0;
    for (size_t g = 0; g < k; ++g) {
        between += deviations[g].size() * (group_mean[g] - grand) * (group_mean[g] - grand);
        for (double z : deviations[g]) within += (z - group_mean[g]) * (z - group_mean[g]);
    }

    const double df1 = static_cast<double>(k - 1);
    const double df2 = static_cast<double>(total - k);
    TestResult result;
    result.test = "levene";
    if (within <= 0.0) {
        result.statistic = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        result.p_value = between > 0.0 ? 0.0 : 1.0;
        return result;
    }
    result.statistic = (df2 / df1) * (between / within);
    // F(df1, df2) survival via the regularized incomplete beta.
    const double x = df2 / (df2 + df1 * result.statistic);
    result.p_value = boost::math::ibeta(df2 / 2.0, df1 / 2.0, x);
    return result;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    const size_t na = a.size(), nb = b.size();
    if (na < 3 || nb < 3) throw NumericalError("mann_whitney_u: each sample needs >= 3 values");
    const size_t n = na + nb;

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double x : a) pooled.emplace_back(x, 0);
    for (double x : b) pooled.emplace_back(x, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    // Midranks and tie correction.
    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && pooled[j + 1].first == pooled[i].first) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        const double t = static_cast<double>(j - i + 1);
        if (t > 1.0) tie_term += t * t * t - t;
        for (size_t m = i; m <= j; ++m)
            if (pooled[m].second == 0) rank_sum_a += midrank;
        i = j + 1;
    }

    const double u_a = rank_sum_a - static_cast<double>(na) * (na + 1) / 2.0;
    const double mu = static_cast<double>(na) * nb / 2.0;
    const double nd = static_cast<double>(n);
    const double sigma_sq =
        (static_cast<double>(na) * nb / 12.0) * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));

    TestResult result;
    result.test = "mann_whitney_u";
    result.statistic = u_a;
    if (sigma_sq <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double continuity = (u_a > mu) ? -0.5 : (u_a < mu ? 0.5 : 0.0);
    const double z = (u_a - mu + continuity) / std::sqrt(sigma_sq);
    result.p_value = std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
    return result;
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    const size_t na = a.size(), nb = b.size();
    if (na < 3 || nb < 3) throw NumericalError("ks_two_sample: each sample needs >= 3 values");

    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < na && j < nb) {
        const double x = std::min(sa[i], sb[j]);
        while (i < na && sa[i] <= x) ++i;
        while (j < nb && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }

    TestResult result;
    result.test = "ks_two_sample";
    result.statistic = d;
    const double ne = static_cast<double>(na) * nb / static_cast<double>(na + nb);
    const double lambda = std::sqrt(ne) * d;
    if (lambda < 1e-9) {
        result.p_value = 1.0;
        return result;
    }
    // Kolmogorov asymptotic series.
    double p = 0.0;
    for (int term = 1; term <= 100; ++term) {
        const double contrib =
            2.0 * ((term % 2) ? 1.0 : -1.0) * std::exp(-2.0 * term * term * lambda * lambda);
        p += contrib;
        if (std::abs(contrib) < 1e-12) break;
    }
    result.p_value = std::clamp(p, 0.0, 1.0);
    return result;
}

} // namespace anisonet
