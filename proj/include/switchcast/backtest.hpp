#pragma once

#include <memory>
#include <string>
#include <vector>

#include "switchcast/factors.hpp"
#include "switchcast/ols.hpp"
#include "switchcast/panel.hpp"
#include "switchcast/regimes.hpp"
#include "switchcast/series.hpp"

namespace switchcast {

enum class ModelForm { OneState, Switching };
enum class ForecastMode { Regression, Direct };

std::string to_string(ModelForm form);

// Fewer observations of either state and the switching fit collapses to
// the one-state design.
inline constexpr int kMinStateObs = 8;
// Fewer usable estimation pairs and the engine falls back to the
// benchmark forecast for that origin.
inline constexpr int kMinFitObs = 10;

struct ModelSpec {
  std::string predictor;
  ModelForm form = ModelForm::OneState;
  // Direct mode emits the predictor value itself as the forecast
  // (combination forecasts); only meaningful with the one-state form.
  ForecastMode mode = ForecastMode::Regression;
  NwLagPolicy nw = NwLagPolicy::auto_rule();
};

// Switching regression R_{t+1} on {1, S_t, S_t x_t, (1-S_t) x_t}, with the
// documented collapse to {1, x_t} when either state is too thin.
struct SwitchingFit {
  RegressionFit fit;
  bool fell_back = false;

  // Snapshot in forecast-formula terms; the collapsed fit maps to
  // d0 = 0, b1 = g1 so the formula stays valid for any state.
  double b0() const;
  double d0() const;
  double b1() const;
  double g1() const;
};

RegressionFit one_state_fit(const std::vector<double>& y,
                            const std::vector<double>& x,
                            const NwLagPolicy& nw);

SwitchingFit fit_switching(const std::vector<double>& y,
                           const std::vector<double>& x,
                           const std::vector<int>& s, const NwLagPolicy& nw);

// Arithmetic mean of the excess return through `up_to`; the benchmark
// forecast.
double historical_mean(const MonthlySeries& exret, MonthKey up_to);

// One forecast origin. `recession` flags the target month t+1 (-1 when no
// recession data was supplied). `fallback`: 0 full fit, 1 one-state
// collapse, 2 benchmark forecast. The snapshot always reproduces the
// forecast as b0 + d0 S + b1 S x + g1 (1-S) x, except in direct mode
// where the coefficients are not defined.
struct ForecastRow {
  MonthKey origin{0, 1};
  double forecast = 0.0;
  double benchmark = 0.0;
  double realized = 0.0;
  double x_origin = 0.0;
  int state = 0;
  int recession = -1;
  double b0 = 0.0, d0 = 0.0, b1 = 0.0, g1 = 0.0;
  int fallback = 0;
};

struct ForecastTable {
  ModelSpec spec;
  SampleWindow sample{MonthKey{0, 1}, MonthKey{0, 1}};
  SampleWindow initial{MonthKey{0, 1}, MonthKey{0, 1}};
  int tau = 0;
  std::vector<ForecastRow> rows;
};

// Strictly recursive predictor path: path_at(t) may only use data dated
// <= t.
class PredictorSource {
 public:
  virtual ~PredictorSource() = default;
  virtual const std::string& name() const = 0;
  virtual MonthlySeries path_at(MonthKey t) const = 0;
};

class RawPredictorSource final : public PredictorSource {
 public:
  RawPredictorSource(const PredictorPanel& panel, const std::string& name,
                     SampleWindow sample);
  const std::string& name() const override { return name_; }
  MonthlySeries path_at(MonthKey t) const override;

 private:
  std::string name_;
  MonthlySeries series_;
};

// Index re-estimated from scratch at every origin: standardization,
// loadings and scores all use data through t only.
class PlsPredictorSource final : public PredictorSource {
 public:
  PlsPredictorSource(const PredictorPanel& panel, const MonthlySeries& exret,
                     SampleWindow sample);
  const std::string& name() const override { return name_; }
  MonthlySeries path_at(MonthKey t) const override;

 private:
  std::string name_ = "E_PLS";
  PredictorPanel work_;
  SampleWindow sample_;
};

class PcaPredictorSource final : public PredictorSource {
 public:
  PcaPredictorSource(const PredictorPanel& panel, const MonthlySeries& exret,
                     SampleWindow sample);
  const std::string& name() const override { return name_; }
  MonthlySeries path_at(MonthKey t) const override;

 private:
  std::string name_ = "E_PCA";
  PredictorPanel work_;
  SampleWindow sample_;
};

// The combination series is recursive by construction (each month already
// uses only its own history), so the path is computed once.
class FcPredictorSource final : public PredictorSource {
 public:
  FcPredictorSource(const PredictorPanel& panel, const MonthlySeries& exret,
                    SampleWindow sample, SampleWindow initial,
                    std::vector<std::string>* warnings = nullptr);
  const std::string& name() const override { return name_; }
  MonthlySeries path_at(MonthKey t) const override;

 private:
  std::string name_ = "E_FC";
  MonthlySeries series_;
};

// Dispatch on spec.predictor: E_PLS / E_PCA / E_FC build factor sources,
// anything else is read from the panel.
std::unique_ptr<PredictorSource> make_source(const PredictorPanel& panel,
                                             const MonthlySeries& exret,
                                             const std::string& predictor,
                                             SampleWindow sample,
                                             SampleWindow initial);

// Expanding-window forecasts: one row per origin t from initial.last to
// sample.last - 1, each estimated on data <= t only.
ForecastTable run_recursive(const ModelSpec& spec,
                            const PredictorSource& source,
                            const StateSeries& states,
                            const RecessionMask* recessions,
                            const MonthlySeries& exret, SampleWindow sample,
                            SampleWindow initial);

// Out-of-sample R^2 against the recursive-mean benchmark over the masked
// rows (mask = nullptr means all rows). Fraction, not percent.
double r2_oos(const ForecastTable& table, const std::vector<char>* mask);

struct CwResult {
  double t_stat = 0.0;
  double p_one_sided = 0.5;
  int lags = 0;
};

// MSFE-adjusted forecast comparison: regress the adjusted loss
// differential on a constant with HAC variance; one-sided normal p.
// A degenerate differential reports t = 0, p = 0.5.
CwResult clark_west(const ForecastTable& table, const std::vector<char>* mask,
                    const NwLagPolicy& nw);

struct MaybeValue {
  bool available = false;
  double value = 0.0;
  std::string note;
};

struct InSampleEval {
  bool available = false;
  std::string note;
  bool fell_back = false;
  int n = 0;
  int nw_lags = 0;
  double b0 = 0.0, d0 = 0.0, b1 = 0.0, g1 = 0.0;
  double t_b0 = 0.0, t_d0 = 0.0, t_b1 = 0.0, t_g1 = 0.0;
  double r2_adj = 0.0;
  MaybeValue r2_adj_up, r2_adj_down, r2_adj_expansion, r2_adj_recession;
};

struct OosCell {
  bool available = false;
  std::string note;
  int months = 0;
  double r2 = 0.0;
  double cw_t = 0.0;
  double cw_p = 0.5;
  bool economic = false;  // r2 above the economic-threshold option
};

struct ModelEval {
  ModelSpec spec;
  InSampleEval insample;
  OosCell full, expansion, recession, up, down;
};

struct EvalOptions {
  double economic_threshold = 0.005;  // fraction of variance
  // Conditional adjusted R^2: mask the full-sample residuals (default)
  // or refit the within-state model on the subset.
  bool subset_r2_refit = false;
};

struct ModelInputs {
  ModelSpec spec;
  MonthlySeries insample_x;
  ForecastTable table;
};

struct EvalReport {
  SampleWindow sample{MonthKey{0, 1}, MonthKey{0, 1}};
  SampleWindow initial{MonthKey{0, 1}, MonthKey{0, 1}};
  int tau = 0;
  EvalOptions options;
  std::vector<ModelEval> models;
};

EvalReport evaluate(const std::vector<ModelInputs>& models,
                    const StateSeries& states,
                    const RecessionMask* recessions,
                    const MonthlySeries& exret, SampleWindow sample,
                    SampleWindow initial, const EvalOptions& opts = {});

}  // namespace switchcast
