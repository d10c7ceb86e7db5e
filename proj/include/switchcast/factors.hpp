#pragma once

#include <string>
#include <vector>

#include "switchcast/panel.hpp"
#include "switchcast/series.hpp"

namespace switchcast {

enum class FactorKind { Pls, Pca, Fc };

std::string to_string(FactorKind kind);

// First-stage instrumental loadings: slope and intercept of each lagged
// standardized predictor on the realized excess return, data through `end`.
struct PlsLoadings {
  std::vector<std::string> names;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  MonthKey end{0, 1};
};

// Aggregate predictor series. `sign_anchor` records the sign convention
// that was applied (covariance with next-month excess return >= 0 over
// the scored window, when enough overlap exists to evaluate it).
struct FactorSeries {
  FactorKind kind = FactorKind::Pls;
  MonthlySeries values;
  std::string sign_anchor;
};

// Per-month predictor weights with unit L1 norm.
struct WeightPath {
  MonthKey start{0, 1};
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;

  MonthKey month_at(std::size_t row) const {
    return start.plus(static_cast<int>(row));
  }
};

// Recursive index together with the loading snapshot behind each month.
struct RecursivePls {
  FactorSeries series;
  std::vector<PlsLoadings> loadings_path;
};

inline constexpr int kFactorMinHistory = 24;

// Time-series regressions x_{i,t-1} = phi_{i,0} + phi_{i,1} R_t + noise,
// predictors standardized through `end`. Needs >= kFactorMinHistory pairs.
PlsLoadings pls_first_stage(const PredictorPanel& panel,
                            const MonthlySeries& exret, MonthKey end);

// Cross-sectional regression of standardized x_{i,t} on the first-stage
// slopes; the month-t slope is the factor value. When the loadings have no
// cross-sectional spread (or N = 1) the regression drops the intercept,
// which keeps the one-predictor and equal-loading cases exact.
// The panel must carry EXRET for the sign convention.
FactorSeries pls_second_stage(const PredictorPanel& panel,
                              const PlsLoadings& loadings,
                              SampleWindow months);

// recursive=false: one full-sample first stage, then scores over `window`.
// recursive=true: value at t is scored with loadings estimated through t
// only; months with fewer than kFactorMinHistory pairs are not scored.
FactorSeries build_pls_index(const PredictorPanel& panel,
                             const MonthlySeries& exret, SampleWindow window,
                             bool recursive);

// Recursive variant that also keeps the per-month loading snapshots.
RecursivePls build_recursive_pls(const PredictorPanel& panel,
                                 const MonthlySeries& exret,
                                 SampleWindow window);

// First principal component of the predictor correlation matrix, scored on
// standardized predictors. Needs max(kFactorMinHistory, N + 2) months.
FactorSeries build_pca_factor(const PredictorPanel& panel, SampleWindow window,
                              bool recursive);

// Equal-weight mean of the univariate recursive one-state forecasts, one
// per predictor, dated at the forecast origin. Starts at initial.last;
// the initial window must span at least 120 months. Predictors with a
// degenerate estimation sample are dropped from the mean for that month
// (one warning per predictor when a collector is supplied).
FactorSeries build_fc_predictor(const PredictorPanel& panel,
                                const MonthlySeries& exret,
                                SampleWindow window, SampleWindow initial,
                                std::vector<std::string>* warnings = nullptr);

// Month-t weights phi_{i,1}(t) / sum_j |phi_{j,1}(t)|.
WeightPath pls_weight_path(const RecursivePls& recursive);

}  // namespace switchcast
