#include "switchcast/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "switchcast/errors.hpp"

namespace switchcast::synth {

double NormalSampler::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi_v<double> * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

FactorPanelDraw draw_factor_panel(const FactorPanelParams& p) {
  if (p.months < 3 || p.n_predictors < 1) {
    throw parameter_error("factor panel needs months >= 3, predictors >= 1");
  }
  const auto n = static_cast<std::size_t>(p.n_predictors);
  std::vector<double> d1 = p.loadings_factor;
  if (d1.empty()) {
    d1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = 0.6 + 0.05 * static_cast<double>(i);
      d1[i] = (i % 2 == 0) ? mag : -mag;
    }
  }
  std::vector<double> d2 = p.loadings_noise;
  if (d2.empty()) d2.assign(n, 0.0);
  if (d1.size() != n || d2.size() != n) {
    throw parameter_error("loading vectors must match n_predictors");
  }

  NormalSampler gen(p.seed);
  const auto T = static_cast<std::size_t>(p.months);
  std::vector<double> factor(T), common(T);
  for (std::size_t t = 0; t < T; ++t) factor[t] = gen.next();
  for (std::size_t t = 0; t < T; ++t) {
    common[t] = p.common_noise_sd * gen.next();
  }

  // R_{t+1} = alpha0 + alpha1 F_t + noise; the first month gets an
  // unconditioned draw so the series spans the full range.
  std::vector<double> ret(T);
  ret[0] = p.alpha0 + p.return_noise_sd * gen.next();
  for (std::size_t t = 1; t < T; ++t) {
    ret[t] = p.alpha0 + p.alpha1 * factor[t - 1] + p.return_noise_sd * gen.next();
  }

  PredictorPanel panel;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(T);
    double e = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      e = p.predictor_rho * e + p.idio_sd * gen.next();
      x[t] = d1[i] * factor[t] + d2[i] * common[t] + e;
    }
    const std::string name = "X" + std::to_string(i + 1);
    panel.add(name, MonthlySeries(p.start, std::move(x), name));
  }
  MonthlySeries exret(p.start, std::move(ret), kExcessReturn);
  panel.add(kExcessReturn, exret);
  return FactorPanelDraw{std::move(panel), std::move(exret),
                         std::move(factor)};
}

namespace {

std::vector<double> ar1_path(NormalSampler& gen, std::size_t T, double mean,
                             double rho, double shock_sd) {
  std::vector<double> out(T);
  const double stat_sd = shock_sd / std::sqrt(1.0 - rho * rho);
  double v = mean + stat_sd * gen.next();
  for (std::size_t t = 0; t < T; ++t) {
    out[t] = v;
    v = mean + rho * (v - mean) + shock_sd * gen.next();
  }
  return out;
}

}  // namespace

SwitchingSample draw_switching_sample(const SwitchingSampleParams& p) {
  if (p.months < p.tau + 2) {
    throw parameter_error("switching sample too short for its lookback");
  }
  NormalSampler gen(p.seed);
  const auto T = static_cast<std::size_t>(p.months);

  std::vector<double> tms =
      ar1_path(gen, T, p.tms_mean, p.tms_rho, p.tms_shock_sd);
  std::vector<double> x(T);
  double xe = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    xe = p.x_rho * xe + gen.next();
    x[t] = xe;
  }

  MonthlySeries tms_series(p.start, tms, "TMS");
  StateSeries states = state_indicator(tms_series, p.tau);

  std::vector<double> ret(T);
  ret[0] = p.b0 + p.sigma * gen.next();
  for (std::size_t t = 1; t < T; ++t) {
    const int s = states.states[t - 1];
    ret[t] = p.b0 + p.d0 * s + p.b1 * s * x[t - 1] +
             p.g1 * (1 - s) * x[t - 1] + p.sigma * gen.next();
  }

  return SwitchingSample{MonthlySeries(p.start, std::move(x), "X"),
                         std::move(tms_series),
                         MonthlySeries(p.start, std::move(ret), kExcessReturn),
                         std::move(states)};
}

SyntheticDataset draw_dataset(const DatasetParams& p) {
  if (p.months < 120) {
    throw parameter_error("synthetic dataset needs at least 120 months");
  }
  NormalSampler gen(p.seed);
  const auto T = static_cast<std::size_t>(p.months);

  // Term spread in percent; inverts now and then.
  std::vector<double> tms = ar1_path(gen, T, 1.6, 0.92, 0.45);
  MonthlySeries tms_series(p.start, tms, "TMS");
  StateSeries states = state_indicator(tms_series, p.tau);

  // Latent predictive factor.
  std::vector<double> factor(T);
  for (std::size_t t = 0; t < T; ++t) factor[t] = gen.next();
  std::vector<double> common(T);
  for (std::size_t t = 0; t < T; ++t) common[t] = gen.next();

  // Excess return in percent per month, switching on the real-time state.
  std::vector<double> exret(T);
  exret[0] = p.b0 + p.sigma * gen.next();
  for (std::size_t t = 1; t < T; ++t) {
    const int s = states.states[t - 1];
    exret[t] = p.b0 + p.d0 * s + p.b1 * s * factor[t - 1] +
               p.g1 * (1 - s) * factor[t - 1] + p.sigma * gen.next();
  }

  // Risk-free rate, decimal per month, mildly persistent and nonnegative.
  std::vector<double> rfree(T);
  double rf = 0.0025;
  for (std::size_t t = 0; t < T; ++t) {
    rf = 0.0025 + 0.9 * (rf - 0.0025) + 0.0004 * gen.next();
    rfree[t] = std::max(rf, 0.0);
  }
  std::vector<double> ret(T);
  for (std::size_t t = 0; t < T; ++t) {
    ret[t] = rfree[t] + exret[t] / 100.0;
  }

  // File predictors: every canonical column except the derived ERM.
  // Each one is a noisy reading of the factor plus a common component;
  // the term spread column is the state driver itself with a small
  // factor loading mixed in.
  PredictorPanel panel;
  std::size_t idx = 0;
  for (const char* cname : kCanonicalPredictors) {
    const std::string name = cname;
    if (name == "ERM") continue;
    std::vector<double> x(T);
    if (name == "TMS") {
      for (std::size_t t = 0; t < T; ++t) {
        x[t] = tms[t] + 0.25 * factor[t];
      }
    } else {
      const double mag = 0.55 + 0.05 * static_cast<double>(idx);
      const double d1 = (idx % 2 == 0) ? mag : -mag;
      const double d2 = 0.5;
      double e = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        e = 0.6 * e + 0.8 * gen.next();
        x[t] = d1 * factor[t] + d2 * common[t] + e;
      }
    }
    panel.add(name, MonthlySeries(p.start, std::move(x), name));
    ++idx;
  }
  panel.add("RET", MonthlySeries(p.start, std::move(ret), "RET"));
  panel.add("RFREE", MonthlySeries(p.start, std::move(rfree), "RFREE"));

  // Recession episodes: triggered about nine months after an inversion
  // that follows at least six clean months.
  std::vector<int> recession(T, 0);
  int clean = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (tms[t] <= 0.0) {
      if (clean >= 6) {
        const std::size_t from = t + 9;
        const std::size_t len =
            9 + static_cast<std::size_t>(gen.uniform() * 7.0);
        for (std::size_t u = from; u < from + len && u < T; ++u) {
          recession[u] = 1;
        }
      }
      clean = 0;
    } else {
      ++clean;
    }
  }

  return SyntheticDataset{std::move(panel), std::move(recession), p.start};
}

}  // namespace switchcast::synth
