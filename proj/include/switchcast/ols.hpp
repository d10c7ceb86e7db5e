#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "switchcast/errors.hpp"

namespace switchcast {

struct DesignMatrix {
  Eigen::MatrixXd values;            // n x k
  std::vector<std::string> labels;   // k

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index k() const { return values.cols(); }
};

struct RegressionFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd hac_cov;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd residuals;
  double r2_adj = 0.0;
  int nw_lags = 0;
  std::vector<std::string> labels;
};

// Newey-West lag selection: either a fixed count or the automatic rule
// floor(4 * (n/100)^(2/9)).
struct NwLagPolicy {
  bool automatic = true;
  int fixed = 0;

  static NwLagPolicy auto_rule() { return {true, 0}; }
  static NwLagPolicy fixed_lags(int lags) {
    if (lags < 0) throw parameter_error("negative Newey-West lag count");
    return {false, lags};
  }
  int lags_for(int n) const;
  std::string describe() const;
};

// Least-squares fit via SVD with a rank check (singular-value ratio
// threshold 1e-10); never an explicit normal-equations inverse.
// Adjusted R2 uses TSS around the mean of y.
RegressionFit ols_fit(const Eigen::VectorXd& y, const DesignMatrix& X,
                      int nw_lags);

// Bartlett-kernel HAC sandwich (X'X)^-1 S (X'X)^-1 with weights
// w_j = 1 - j/(lags+1). lags = 0 reduces to the White estimator.
Eigen::MatrixXd newey_west_cov(const DesignMatrix& X,
                               const Eigen::VectorXd& residuals, int lags);

// Adjusted R2 over the masked subset, using the full-sample fit's
// residuals; TSS around the masked-sample mean, n replaced by the masked
// count, k unchanged.
double subset_adjusted_r2(const RegressionFit& fit, const Eigen::VectorXd& y,
                          const std::vector<char>& mask);

double normal_cdf(double x);
double two_sided_p(double t);
double one_sided_p(double t);  // P(Z > t)

}  // namespace switchcast
