#include "switchcast/ols.hpp"

#include <cmath>
#include <limits>

namespace switchcast {

namespace {

constexpr double kRankTolerance = 1e-10;

std::string join_labels(const std::vector<std::string>& labels,
                        const std::vector<int>& idx) {
  std::string out;
  for (const int i : idx) {
    if (!out.empty()) out += ", ";
    out += labels.empty() ? ("col" + std::to_string(i)) : labels[i];
  }
  return out;
}

}  // namespace

int NwLagPolicy::lags_for(int n) const {
  if (!automatic) return fixed;
  if (n < 1) throw parameter_error("lag rule needs n >= 1");
  return static_cast<int>(
      std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0)));
}

std::string NwLagPolicy::describe() const {
  return automatic ? "auto" : std::to_string(fixed);
}

RegressionFit ols_fit(const Eigen::VectorXd& y, const DesignMatrix& X,
                      int nw_lags) {
  const Eigen::Index n = X.n();
  const Eigen::Index k = X.k();
  if (y.size() != n) {
    throw parameter_error("ols_fit: y has " + std::to_string(y.size()) +
                          " rows, X has " + std::to_string(n));
  }
  if (nw_lags < 0) throw parameter_error("ols_fit: negative lag count");
  if (n <= k + nw_lags) {
    throw insufficient_data_error(
        "ols_fit: need n > k + lags (n=" + std::to_string(n) +
        ", k=" + std::to_string(k) + ", lags=" + std::to_string(nw_lags) + ")");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      X.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(k - 1) / sv(0) < kRankTolerance) {
    // Columns loading on the null direction are the collinear set.
    const Eigen::VectorXd null_dir = svd.matrixV().col(k - 1);
    const double top = null_dir.cwiseAbs().maxCoeff();
    std::vector<int> involved;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(null_dir(j)) >= 0.25 * top) {
        involved.push_back(static_cast<int>(j));
      }
    }
    throw singular_design_error("singular design; collinear columns: " +
                                join_labels(X.labels, involved));
  }

  RegressionFit fit;
  fit.labels = X.labels;
  fit.nw_lags = nw_lags;
  fit.coefficients = svd.solve(y);
  fit.residuals = y - X.values * fit.coefficients;
  fit.hac_cov = newey_west_cov(X, fit.residuals, nw_lags);
  fit.t_stats.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double se = std::sqrt(fit.hac_cov(j, j));
    fit.t_stats(j) = se > 0.0 ? fit.coefficients(j) / se : 0.0;
  }

  const double ssr = fit.residuals.squaredNorm();
  const double ymean = y.mean();
  const double tss = (y.array() - ymean).square().sum();
  if (tss > 0.0) {
    fit.r2_adj = 1.0 - (ssr / static_cast<double>(n - k)) /
                           (tss / static_cast<double>(n - 1));
  } else {
    fit.r2_adj = 0.0;  // constant target: nothing to explain
  }
  return fit;
}

Eigen::MatrixXd newey_west_cov(const DesignMatrix& X,
                               const Eigen::VectorXd& residuals, int lags) {
  const Eigen::Index n = X.n();
  const Eigen::Index k = X.k();
  if (residuals.size() != n) {
    throw parameter_error("newey_west_cov: residual length mismatch");
  }
  if (lags < 0 || lags >= n) {
    throw parameter_error("newey_west_cov: lags must satisfy 0 <= lags < n");
  }

  const Eigen::MatrixXd xtx_inv =
      (X.values.transpose() * X.values).ldlt().solve(
          Eigen::MatrixXd::Identity(k, k));

  // Scores g_t = u_t x_t.
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd g = residuals(t) * X.values.row(t).transpose();
    s.noalias() += g * g.transpose();
  }
  for (int j = 1; j <= lags; ++j) {
    const double w = 1.0 - static_cast<double>(j) / (lags + 1);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index t = j; t < n; ++t) {
      const Eigen::VectorXd gt = residuals(t) * X.values.row(t).transpose();
      const Eigen::VectorXd gl =
          residuals(t - j) * X.values.row(t - j).transpose();
      gamma.noalias() += gt * gl.transpose();
    }
    s.noalias() += w * (gamma + gamma.transpose());
  }
  return xtx_inv * s * xtx_inv;
}

double subset_adjusted_r2(const RegressionFit& fit, const Eigen::VectorXd& y,
                          const std::vector<char>& mask) {
  const Eigen::Index n = y.size();
  if (fit.residuals.size() != n ||
      static_cast<Eigen::Index>(mask.size()) != n) {
    throw parameter_error("subset_adjusted_r2: length mismatch");
  }
  const Eigen::Index k = fit.coefficients.size();
  int m = 0;
  for (const bool b : mask) m += b ? 1 : 0;
  if (m < k + 2) {
    throw insufficient_data_error(
        "subset_adjusted_r2: mask keeps " + std::to_string(m) +
        " observations, need at least " + std::to_string(k + 2));
  }
  double ssr = 0.0, ysum = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (!mask[static_cast<std::size_t>(t)]) continue;
    ssr += fit.residuals(t) * fit.residuals(t);
    ysum += y(t);
  }
  const double ybar = ysum / m;
  double tss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (!mask[static_cast<std::size_t>(t)]) continue;
    tss += (y(t) - ybar) * (y(t) - ybar);
  }
  if (!(tss > 0.0)) {
    throw degenerate_input_error(
        "subset_adjusted_r2: zero within-mask variance of y");
  }
  return 1.0 - (ssr / static_cast<double>(m - k)) /
                   (tss / static_cast<double>(m - 1));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double two_sided_p(double t) { return 2.0 * (1.0 - normal_cdf(std::abs(t))); }

double one_sided_p(double t) { return 1.0 - normal_cdf(t); }

}  // namespace switchcast
