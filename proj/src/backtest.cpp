#include "switchcast/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "switchcast/errors.hpp"

namespace switchcast {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMinOosMonths = 12;
}  // namespace

std::string to_string(ModelForm form) {
  return form == ModelForm::OneState ? "one_state" : "switching";
}

double SwitchingFit::b0() const { return fit.coefficients[0]; }
double SwitchingFit::d0() const {
  return fell_back ? 0.0 : fit.coefficients[1];
}
double SwitchingFit::b1() const {
  return fell_back ? fit.coefficients[1] : fit.coefficients[2];
}
double SwitchingFit::g1() const {
  return fell_back ? fit.coefficients[1] : fit.coefficients[3];
}

RegressionFit one_state_fit(const std::vector<double>& y,
                            const std::vector<double>& x,
                            const NwLagPolicy& nw) {
  if (y.size() != x.size()) {
    throw parameter_error("one_state_fit: y and x lengths differ");
  }
  const auto n = static_cast<Eigen::Index>(y.size());
  DesignMatrix X;
  X.values.resize(n, 2);
  X.labels = {"const", "x"};
  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.values(i, 0) = 1.0;
    X.values(i, 1) = x[static_cast<std::size_t>(i)];
    yv(i) = y[static_cast<std::size_t>(i)];
  }
  return ols_fit(yv, X, nw.lags_for(static_cast<int>(n)));
}

SwitchingFit fit_switching(const std::vector<double>& y,
                           const std::vector<double>& x,
                           const std::vector<int>& s, const NwLagPolicy& nw) {
  if (y.size() != x.size() || y.size() != s.size()) {
    throw parameter_error("fit_switching: y, x and s lengths differ");
  }
  int n1 = 0;
  for (int v : s) {
    if (v != 0 && v != 1) {
      throw parameter_error("fit_switching: states must be 0 or 1");
    }
    n1 += v;
  }
  const int n0 = static_cast<int>(s.size()) - n1;
  if (n1 < kMinStateObs || n0 < kMinStateObs) {
    return SwitchingFit{one_state_fit(y, x, nw), true};
  }
  const auto n = static_cast<Eigen::Index>(y.size());
  DesignMatrix X;
  X.values.resize(n, 4);
  X.labels = {"const", "state", "state_x", "nostate_x"};
  Eigen::VectorXd yv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    X.values(i, 0) = 1.0;
    X.values(i, 1) = s[u];
    X.values(i, 2) = s[u] * x[u];
    X.values(i, 3) = (1 - s[u]) * x[u];
    yv(i) = y[u];
  }
  return SwitchingFit{ols_fit(yv, X, nw.lags_for(static_cast<int>(n))), false};
}

double historical_mean(const MonthlySeries& exret, MonthKey up_to) {
  return mean_through(exret, up_to);
}

RawPredictorSource::RawPredictorSource(const PredictorPanel& panel,
                                       const std::string& name,
                                       SampleWindow sample)
    : name_(name), series_(panel.get(name).slice(sample)) {}

MonthlySeries RawPredictorSource::path_at(MonthKey t) const {
  return series_.slice(SampleWindow{series_.start(), t});
}

namespace {

PredictorPanel factor_panel(const PredictorPanel& panel,
                            const MonthlySeries& exret, SampleWindow sample) {
  PredictorPanel work = align(panel, sample);
  if (work.has(kExcessReturn)) work.remove(kExcessReturn);
  work.add(kExcessReturn, exret.slice(sample).renamed(kExcessReturn));
  return work;
}

}  // namespace

PlsPredictorSource::PlsPredictorSource(const PredictorPanel& panel,
                                       const MonthlySeries& exret,
                                       SampleWindow sample)
    : work_(factor_panel(panel, exret, sample)), sample_(sample) {}

MonthlySeries PlsPredictorSource::path_at(MonthKey t) const {
  PlsLoadings loadings =
      pls_first_stage(work_, work_.get(kExcessReturn), t);
  return pls_second_stage(work_, loadings, SampleWindow{sample_.first, t})
      .values;
}

PcaPredictorSource::PcaPredictorSource(const PredictorPanel& panel,
                                       const MonthlySeries& exret,
                                       SampleWindow sample)
    : work_(factor_panel(panel, exret, sample)), sample_(sample) {}

MonthlySeries PcaPredictorSource::path_at(MonthKey t) const {
  return build_pca_factor(work_, SampleWindow{sample_.first, t}, false).values;
}

FcPredictorSource::FcPredictorSource(const PredictorPanel& panel,
                                     const MonthlySeries& exret,
                                     SampleWindow sample, SampleWindow initial,
                                     std::vector<std::string>* warnings)
    : series_(
          build_fc_predictor(panel, exret, sample, initial, warnings).values) {
}

MonthlySeries FcPredictorSource::path_at(MonthKey t) const {
  return series_.slice(SampleWindow{series_.start(), t});
}

std::unique_ptr<PredictorSource> make_source(const PredictorPanel& panel,
                                             const MonthlySeries& exret,
                                             const std::string& predictor,
                                             SampleWindow sample,
                                             SampleWindow initial) {
  if (predictor == "E_PLS") {
    return std::make_unique<PlsPredictorSource>(panel, exret, sample);
  }
  if (predictor == "E_PCA") {
    return std::make_unique<PcaPredictorSource>(panel, exret, sample);
  }
  if (predictor == "E_FC") {
    return std::make_unique<FcPredictorSource>(panel, exret, sample, initial);
  }
  return std::make_unique<RawPredictorSource>(panel, predictor, sample);
}

ForecastTable run_recursive(const ModelSpec& spec,
                            const PredictorSource& source,
                            const StateSeries& states,
                            const RecessionMask* recessions,
                            const MonthlySeries& exret, SampleWindow sample,
                            SampleWindow initial) {
  if (initial.first != sample.first) {
    throw parameter_error("initial window must start with the sample (" +
                          to_string(initial.first) + " vs " +
                          to_string(sample.first) + ")");
  }
  if (!(initial.last < sample.last)) {
    throw parameter_error(
        "no forecast origins: initial window reaches the sample end");
  }
  if (spec.mode == ForecastMode::Direct &&
      spec.form == ModelForm::Switching) {
    throw parameter_error("direct forecasts are one-state only");
  }
  const MonthlySeries ret = exret.slice(sample);
  // Touch the state endpoints once so coverage problems surface before
  // the loop.
  states.at(sample.first);
  states.at(sample.last.prev());

  ForecastTable table;
  table.spec = spec;
  table.sample = sample;
  table.initial = initial;
  table.tau = states.tau;
  table.rows.reserve(static_cast<std::size_t>(
      months_between(initial.last, sample.last)));

  for (MonthKey t = initial.last; t < sample.last; t = t.next()) {
    MonthlySeries path = source.path_at(t);
    if (path.last() != t) {
      throw alignment_error("predictor path for origin " + to_string(t) +
                            " ends at " + to_string(path.last()));
    }
    ForecastRow row;
    row.origin = t;
    row.x_origin = path.at(t);
    row.benchmark = mean_through(ret, t);
    row.realized = ret.at(t.next());
    row.state = states.at(t);
    row.recession = recessions ? recessions->at(t.next()) : -1;

    const auto to_benchmark = [&row]() {
      row.forecast = row.benchmark;
      row.b0 = row.benchmark;
      row.d0 = row.b1 = row.g1 = 0.0;
      row.fallback = 2;
    };

    if (spec.mode == ForecastMode::Direct) {
      row.forecast = row.x_origin;
      row.b0 = row.d0 = row.b1 = row.g1 = kNaN;
      row.fallback = 0;
    } else {
      std::vector<double> ys, xs;
      std::vector<int> ss;
      for (MonthKey s = path.start(); s < t; s = s.next()) {
        xs.push_back(path.at(s));
        ys.push_back(ret.at(s.next()));
        ss.push_back(states.at(s));
      }
      if (static_cast<int>(ys.size()) < kMinFitObs) {
        to_benchmark();
      } else {
        try {
          if (spec.form == ModelForm::Switching) {
            const SwitchingFit sf = fit_switching(ys, xs, ss, spec.nw);
            row.b0 = sf.b0();
            row.d0 = sf.d0();
            row.b1 = sf.b1();
            row.g1 = sf.g1();
            row.fallback = sf.fell_back ? 1 : 0;
          } else {
            const RegressionFit f = one_state_fit(ys, xs, spec.nw);
            row.b0 = f.coefficients[0];
            row.d0 = 0.0;
            row.b1 = f.coefficients[1];
            row.g1 = f.coefficients[1];
            row.fallback = 0;
          }
          row.forecast = row.b0 + row.d0 * row.state +
                         row.b1 * row.state * row.x_origin +
                         row.g1 * (1 - row.state) * row.x_origin;
        } catch (const singular_design_error&) {
          to_benchmark();
        } catch (const insufficient_data_error&) {
          to_benchmark();
        } catch (const degenerate_input_error&) {
          to_benchmark();
        }
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

int masked_count(const ForecastTable& table, const std::vector<char>* mask) {
  if (!mask) return static_cast<int>(table.rows.size());
  if (mask->size() != table.rows.size()) {
    throw parameter_error("mask length does not match the forecast table");
  }
  int m = 0;
  for (char c : *mask) m += c ? 1 : 0;
  return m;
}

}  // namespace

double r2_oos(const ForecastTable& table, const std::vector<char>* mask) {
  const int m = masked_count(table, mask);
  if (m < kMinOosMonths) {
    throw insufficient_data_error(
        "out-of-sample R^2 needs at least " + std::to_string(kMinOosMonths) +
        " months, got " + std::to_string(m));
  }
  double sse_model = 0.0, sse_bench = 0.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const auto& r = table.rows[i];
    const double em = r.realized - r.forecast;
    const double eb = r.realized - r.benchmark;
    sse_model += em * em;
    sse_bench += eb * eb;
  }
  if (!(sse_bench > 0.0)) {
    throw undefined_value_error(
        "benchmark squared error is zero over the masked months");
  }
  return 1.0 - sse_model / sse_bench;
}

CwResult clark_west(const ForecastTable& table, const std::vector<char>* mask,
                    const NwLagPolicy& nw) {
  const int m = masked_count(table, mask);
  if (m < kMinOosMonths) {
    throw insufficient_data_error(
        "forecast comparison needs at least " + std::to_string(kMinOosMonths) +
        " months, got " + std::to_string(m));
  }
  Eigen::VectorXd f(m);
  DesignMatrix X;
  X.values = Eigen::MatrixXd::Ones(m, 1);
  X.labels = {"const"};
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const auto& r = table.rows[i];
    const double a = r.realized - r.benchmark;
    const double b = r.realized - r.forecast;
    const double c = r.benchmark - r.forecast;
    const double f1 = a * a - b * b + c * c;
    const double f2 = 2.0 * a * (r.forecast - r.benchmark);
    if (std::abs(f1 - f2) > 1e-8 * (1.0 + std::abs(f1) + std::abs(f2))) {
      throw numerical_error(
          "adjusted loss differential failed its identity check at " +
          to_string(r.origin));
    }
    f(j++) = f1;
  }
  const int lags = nw.lags_for(m);
  const RegressionFit fit = ols_fit(f, X, lags);
  CwResult out;
  out.t_stat = fit.t_stats[0];
  out.p_one_sided = one_sided_p(out.t_stat);
  out.lags = lags;
  return out;
}

namespace {

OosCell oos_cell(const ForecastTable& table, const std::vector<char>* mask,
                 const NwLagPolicy& nw, double threshold) {
  OosCell cell;
  try {
    cell.months = masked_count(table, mask);
    cell.r2 = r2_oos(table, mask);
    const CwResult cw = clark_west(table, mask, nw);
    cell.cw_t = cw.t_stat;
    cell.cw_p = cw.p_one_sided;
    cell.economic = cell.r2 > threshold;
    cell.available = true;
  } catch (const insufficient_data_error& e) {
    cell.note = e.what();
  } catch (const undefined_value_error& e) {
    cell.note = e.what();
  }
  return cell;
}

MaybeValue conditional_r2adj(const RegressionFit& fit,
                             const std::vector<double>& y,
                             const std::vector<double>& x,
                             const std::vector<int>& s,
                             const std::vector<char>& mask, ModelForm form,
                             const NwLagPolicy& nw, bool refit) {
  MaybeValue out;
  try {
    if (refit) {
      std::vector<double> sy, sx;
      std::vector<int> ss;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        sy.push_back(y[i]);
        sx.push_back(x[i]);
        ss.push_back(s[i]);
      }
      if (form == ModelForm::Switching) {
        out.value = fit_switching(sy, sx, ss, nw).fit.r2_adj;
      } else {
        out.value = one_state_fit(sy, sx, nw).r2_adj;
      }
    } else {
      Eigen::VectorXd yv(static_cast<Eigen::Index>(y.size()));
      for (std::size_t i = 0; i < y.size(); ++i) {
        yv(static_cast<Eigen::Index>(i)) = y[i];
      }
      out.value = subset_adjusted_r2(fit, yv, mask);
    }
    out.available = true;
  } catch (const error& e) {
    out.note = e.what();
  }
  return out;
}

InSampleEval insample_eval(const ModelInputs& mi, const StateSeries& states,
                           const RecessionMask* recessions,
                           const MonthlySeries& ret, SampleWindow sample,
                           const EvalOptions& opts) {
  InSampleEval ev;
  const MonthlySeries& xser = mi.insample_x;
  MonthKey first = xser.start() < sample.first ? sample.first : xser.start();
  std::vector<double> y, x;
  std::vector<int> s;
  std::vector<char> up, down, exp_mask, rec_mask;
  const bool have_rec = recessions != nullptr;
  for (MonthKey m = first; m < sample.last; m = m.next()) {
    x.push_back(xser.at(m));
    y.push_back(ret.at(m.next()));
    const int st = states.at(m);
    s.push_back(st);
    up.push_back(st == 0);
    down.push_back(st == 1);
    if (have_rec) {
      const int rc = recessions->at(m.next());
      exp_mask.push_back(rc == 0);
      rec_mask.push_back(rc == 1);
    }
  }
  ev.n = static_cast<int>(y.size());
  if (ev.n < kMinFitObs) {
    ev.note = "fewer than " + std::to_string(kMinFitObs) +
              " in-sample months";
    return ev;
  }
  try {
    RegressionFit fit;
    if (mi.spec.form == ModelForm::Switching) {
      const SwitchingFit sf = fit_switching(y, x, s, mi.spec.nw);
      fit = sf.fit;
      ev.fell_back = sf.fell_back;
      ev.b0 = sf.b0();
      ev.d0 = sf.d0();
      ev.b1 = sf.b1();
      ev.g1 = sf.g1();
      if (sf.fell_back) {
        ev.t_b0 = fit.t_stats[0];
        ev.t_b1 = ev.t_g1 = fit.t_stats[1];
        ev.t_d0 = 0.0;
      } else {
        ev.t_b0 = fit.t_stats[0];
        ev.t_d0 = fit.t_stats[1];
        ev.t_b1 = fit.t_stats[2];
        ev.t_g1 = fit.t_stats[3];
      }
    } else {
      fit = one_state_fit(y, x, mi.spec.nw);
      ev.b0 = fit.coefficients[0];
      ev.b1 = ev.g1 = fit.coefficients[1];
      ev.d0 = 0.0;
      ev.t_b0 = fit.t_stats[0];
      ev.t_b1 = ev.t_g1 = fit.t_stats[1];
      ev.t_d0 = 0.0;
    }
    ev.nw_lags = fit.nw_lags;
    ev.r2_adj = fit.r2_adj;
    ev.available = true;
    const bool refit = opts.subset_r2_refit;
    ev.r2_adj_up = conditional_r2adj(fit, y, x, s, up, mi.spec.form,
                                     mi.spec.nw, refit);
    ev.r2_adj_down = conditional_r2adj(fit, y, x, s, down, mi.spec.form,
                                       mi.spec.nw, refit);
    if (have_rec) {
      ev.r2_adj_expansion = conditional_r2adj(fit, y, x, s, exp_mask,
                                              mi.spec.form, mi.spec.nw, refit);
      ev.r2_adj_recession = conditional_r2adj(fit, y, x, s, rec_mask,
                                              mi.spec.form, mi.spec.nw, refit);
    } else {
      ev.r2_adj_expansion.note = "no recession data";
      ev.r2_adj_recession.note = "no recession data";
    }
  } catch (const error& e) {
    ev.available = false;
    ev.note = e.what();
  }
  return ev;
}

}  // namespace

EvalReport evaluate(const std::vector<ModelInputs>& models,
                    const StateSeries& states,
                    const RecessionMask* recessions,
                    const MonthlySeries& exret, SampleWindow sample,
                    SampleWindow initial, const EvalOptions& opts) {
  EvalReport report;
  report.sample = sample;
  report.initial = initial;
  report.tau = states.tau;
  report.options = opts;
  const MonthlySeries ret = exret.slice(sample);

  for (const auto& mi : models) {
    ModelEval ev;
    ev.spec = mi.spec;
    ev.insample = insample_eval(mi, states, recessions, ret, sample, opts);

    const auto& rows = mi.table.rows;
    std::vector<char> exp_mask(rows.size()), rec_mask(rows.size()),
        up_mask(rows.size()), down_mask(rows.size());
    bool have_rec = !rows.empty();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].recession < 0) have_rec = false;
      exp_mask[i] = rows[i].recession == 0;
      rec_mask[i] = rows[i].recession == 1;
      up_mask[i] = rows[i].state == 0;
      down_mask[i] = rows[i].state == 1;
    }
    const double thr = opts.economic_threshold;
    ev.full = oos_cell(mi.table, nullptr, mi.spec.nw, thr);
    if (have_rec) {
      ev.expansion = oos_cell(mi.table, &exp_mask, mi.spec.nw, thr);
      ev.recession = oos_cell(mi.table, &rec_mask, mi.spec.nw, thr);
    } else {
      ev.expansion.note = "no recession data";
      ev.recession.note = "no recession data";
    }
    ev.up = oos_cell(mi.table, &up_mask, mi.spec.nw, thr);
    ev.down = oos_cell(mi.table, &down_mask, mi.spec.nw, thr);
    report.models.push_back(std::move(ev));
  }
  return report;
}

}  // namespace switchcast
