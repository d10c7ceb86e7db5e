#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "switchcast/panel.hpp"
#include "switchcast/regimes.hpp"
#include "switchcast/series.hpp"

namespace switchcast::synth {

// Standard-normal stream with a pinned algorithm (Box-Muller over
// mt19937_64), so a seed fully determines every dataset we generate.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  // [0, 1)
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double next();

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Panel drawn from the latent-factor design: returns load on F, each
// predictor loads on F plus an optional common noise component that the
// principal component is free to chase.
struct FactorPanelParams {
  MonthKey start{1960, 1};
  int months = 240;
  int n_predictors = 16;
  double alpha0 = 0.5;
  double alpha1 = 1.0;          // return loading on F
  double common_noise_sd = 0.0; // Y_t scale
  double idio_sd = 1.0;
  double return_noise_sd = 4.0; // percent per month
  double predictor_rho = 0.0;   // AR(1) of the idiosyncratic noise
  // delta_{i,1}; autogenerated (mixed sign) when empty.
  std::vector<double> loadings_factor;
  // delta_{i,2}; zeros when empty.
  std::vector<double> loadings_noise;
  std::uint64_t seed = 1;
};

struct FactorPanelDraw {
  PredictorPanel panel;  // X1..Xn plus EXRET
  MonthlySeries exret;
  std::vector<double> factor;  // true F_t
};

FactorPanelDraw draw_factor_panel(const FactorPanelParams& p);

// Term-spread-driven two-state sample with planted regression
// coefficients; the null case (all slopes zero) doubles as the
// size-check generator.
struct SwitchingSampleParams {
  MonthKey start{1960, 1};
  int months = 600;
  double b0 = 0.2, d0 = -0.3, b1 = 0.05, g1 = 0.08;
  double sigma = 0.5;
  int tau = 9;
  double tms_mean = 1.6, tms_rho = 0.92, tms_shock_sd = 0.45;
  double x_rho = 0.0;
  std::uint64_t seed = 7;
};

struct SwitchingSample {
  MonthlySeries x;
  MonthlySeries tms;
  MonthlySeries exret;
  StateSeries states;
};

SwitchingSample draw_switching_sample(const SwitchingSampleParams& p);

// Full dataset for the bundled demo files: a 15-predictor panel in file
// layout (decimal RET/RFREE columns, term spread doubling as the state
// driver) plus recession episodes seeded about nine months after each
// fresh inversion.
struct DatasetParams {
  MonthKey start{1958, 1};
  int months = 720;
  int tau = 9;
  double b0 = 0.8, d0 = -1.0, b1 = 0.9, g1 = 0.45;  // percent units
  double sigma = 4.0;
  std::uint64_t seed = 20170831;
};

struct SyntheticDataset {
  PredictorPanel file_panel;   // predictor columns + RET + RFREE
  std::vector<int> recession;  // one flag per month from `start`
  MonthKey start{1958, 1};
};

SyntheticDataset draw_dataset(const DatasetParams& p);

}  // namespace switchcast::synth
