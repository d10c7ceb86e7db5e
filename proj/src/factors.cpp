#include "switchcast/factors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "switchcast/errors.hpp"

namespace switchcast {

std::string to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::Pls:
      return "PLS";
    case FactorKind::Pca:
      return "PCA";
    case FactorKind::Fc:
      return "FC";
  }
  return "?";
}

namespace {

// Shared start month of the named series; the factor math indexes all of
// them with one offset, so ragged starts are rejected up front.
MonthKey common_start(const PredictorPanel& panel,
                      const std::vector<std::string>& names) {
  if (names.empty()) {
    throw schema_error("panel has no predictors");
  }
  MonthKey s0 = panel.get(names.front()).start();
  for (const auto& name : names) {
    if (panel.get(name).start() != s0) {
      throw alignment_error("predictor '" + name + "' starts at " +
                            to_string(panel.get(name).start()) +
                            ", others at " + to_string(s0) +
                            "; align the panel first");
    }
  }
  return s0;
}

// Standardized predictor matrix over [start, end], one column per name.
Eigen::MatrixXd standardized_block(const PredictorPanel& panel,
                                   const std::vector<std::string>& names,
                                   MonthKey start, MonthKey end) {
  const int rows = months_between(start, end) + 1;
  Eigen::MatrixXd z(rows, static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    MonthlySeries std_series = standardize_through(panel.get(names[j]), end);
    for (int r = 0; r < rows; ++r) {
      z(r, static_cast<Eigen::Index>(j)) =
          std_series[static_cast<std::size_t>(r)];
    }
  }
  return z;
}

struct SignOutcome {
  bool flipped = false;
  std::string description;
};

// Enforces cov(F_s, R_{s+1}) >= 0 over the scored months, using only
// returns dated <= cap so recursive paths never peek past the estimation
// end. With fewer than 2 usable pairs the sign is left as computed.
SignOutcome apply_sign_convention(std::vector<double>& values, MonthKey start,
                                  const MonthlySeries& exret, MonthKey cap) {
  double sum_f = 0.0, sum_r = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const MonthKey target = start.plus(static_cast<int>(i)).next();
    if (target > cap || !exret.in_range(target)) continue;
    sum_f += values[i];
    sum_r += exret.at(target);
    ++m;
  }
  if (m < 2) {
    return {false, "sign convention skipped (fewer than 2 anchor months)"};
  }
  const double mean_f = sum_f / m;
  const double mean_r = sum_r / m;
  double cov = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const MonthKey target = start.plus(static_cast<int>(i)).next();
    if (target > cap || !exret.in_range(target)) continue;
    cov += (values[i] - mean_f) * (exret.at(target) - mean_r);
  }
  SignOutcome out;
  out.flipped = cov < 0.0;
  if (out.flipped) {
    for (auto& v : values) v = -v;
  }
  out.description = "cov(index, next-month EXRET) >= 0 anchored on returns through " +
                    to_string(cap);
  return out;
}

const MonthlySeries& panel_exret(const PredictorPanel& panel) {
  if (!panel.has(kExcessReturn)) {
    throw schema_error(
        "panel lacks EXRET, required for the factor sign convention");
  }
  return panel.get(kExcessReturn);
}

struct ScoredPls {
  FactorSeries series;
  bool flipped = false;
};

ScoredPls score_pls(const PredictorPanel& panel, const PlsLoadings& loadings,
                    SampleWindow months) {
  const auto& names = loadings.names;
  if (names.empty()) {
    throw schema_error("loadings carry no predictors");
  }
  if (loadings.slopes.size() != names.size() ||
      loadings.intercepts.size() != names.size()) {
    throw parameter_error("loadings are inconsistent with their predictor list");
  }
  if (loadings.end < months.last) {
    throw coverage_error("second stage cannot score " +
                         to_string(months.last) +
                         " with loadings estimated through " +
                         to_string(loadings.end));
  }
  const MonthKey s0 = common_start(panel, names);
  if (months.first < s0) {
    throw coverage_error("second stage window starts before the panel (" +
                         to_string(months.first) + " < " + to_string(s0) +
                         ")");
  }
  const Eigen::MatrixXd z = standardized_block(panel, names, s0, loadings.end);

  const std::size_t n = names.size();
  double phi_max = 0.0;
  double phi_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    phi_max = std::max(phi_max, std::abs(loadings.slopes[i]));
    phi_mean += loadings.slopes[i];
  }
  phi_mean /= static_cast<double>(n);
  if (phi_max < 1e-12) {
    throw degenerate_input_error(
        "first-stage loadings are all zero through " + to_string(loadings.end));
  }
  double phi_ssd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = loadings.slopes[i] - phi_mean;
    phi_ssd += d * d;
  }
  // No cross-sectional spread: fit through the origin instead.
  const bool with_intercept =
      n >= 2 && std::sqrt(phi_ssd / static_cast<double>(n)) > 1e-10 * phi_max;

  std::vector<double> scores(static_cast<std::size_t>(months.length()));
  const int off = months_between(s0, months.first);
  for (int r = 0; r < months.length(); ++r) {
    const Eigen::Index row = off + r;
    double num = 0.0, den = 0.0;
    if (with_intercept) {
      double x_mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x_mean += z(row, static_cast<Eigen::Index>(i));
      }
      x_mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double dphi = loadings.slopes[i] - phi_mean;
        num += dphi * (z(row, static_cast<Eigen::Index>(i)) - x_mean);
        den += dphi * dphi;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        num += loadings.slopes[i] * z(row, static_cast<Eigen::Index>(i));
        den += loadings.slopes[i] * loadings.slopes[i];
      }
    }
    scores[static_cast<std::size_t>(r)] = num / den;
  }

  const MonthlySeries& exret = panel_exret(panel);
  SignOutcome sign =
      apply_sign_convention(scores, months.first, exret, loadings.end);
  return ScoredPls{
      FactorSeries{FactorKind::Pls,
                   MonthlySeries(months.first, std::move(scores), "E_PLS"),
                   std::move(sign.description)},
      sign.flipped};
}

}  // namespace

PlsLoadings pls_first_stage(const PredictorPanel& panel,
                            const MonthlySeries& exret, MonthKey end) {
  const std::vector<std::string> names = panel.predictor_names();
  const MonthKey s0 = common_start(panel, names);
  const int pairs = months_between(s0, end);
  if (pairs < kFactorMinHistory) {
    throw insufficient_data_error(
        "first stage needs at least " + std::to_string(kFactorMinHistory) +
        " months through " + to_string(end) + ", got " +
        std::to_string(pairs));
  }

  // Instrument: realized return R_t, t = s0+1 .. end.
  std::vector<double> r(static_cast<std::size_t>(pairs));
  double r_mean = 0.0;
  for (int t = 0; t < pairs; ++t) {
    r[static_cast<std::size_t>(t)] = exret.at(s0.plus(t + 1));
    r_mean += r[static_cast<std::size_t>(t)];
  }
  r_mean /= pairs;
  double r_ssd = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const double d = r[static_cast<std::size_t>(t)] - r_mean;
    r_ssd += d * d;
  }
  if (!(r_ssd > 0.0)) {
    throw degenerate_input_error("excess return has zero variance through " +
                                 to_string(end));
  }

  PlsLoadings out;
  out.names = names;
  out.end = end;
  out.slopes.resize(names.size());
  out.intercepts.resize(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    const MonthlySeries z = standardize_through(panel.get(names[j]), end);
    double x_mean = 0.0;
    for (int t = 0; t < pairs; ++t) {
      x_mean += z[static_cast<std::size_t>(t)];  // x_{t-1} for return at t+1+s0
    }
    x_mean /= pairs;
    double num = 0.0;
    for (int t = 0; t < pairs; ++t) {
      num += (r[static_cast<std::size_t>(t)] - r_mean) *
             (z[static_cast<std::size_t>(t)] - x_mean);
    }
    out.slopes[j] = num / r_ssd;
    out.intercepts[j] = x_mean - out.slopes[j] * r_mean;
  }
  return out;
}

FactorSeries pls_second_stage(const PredictorPanel& panel,
                              const PlsLoadings& loadings,
                              SampleWindow months) {
  return score_pls(panel, loadings, months).series;
}

RecursivePls build_recursive_pls(const PredictorPanel& panel,
                                 const MonthlySeries& exret,
                                 SampleWindow window) {
  PredictorPanel work = align(panel, window);
  if (work.has(kExcessReturn)) work.remove(kExcessReturn);
  work.add(kExcessReturn, exret.slice(window).renamed(kExcessReturn));
  const MonthlySeries& work_ret = work.get(kExcessReturn);

  const MonthKey first_scored = window.first.plus(kFactorMinHistory);
  if (window.last < first_scored) {
    throw insufficient_data_error(
        "window too short for a recursive index: needs more than " +
        std::to_string(kFactorMinHistory) + " months");
  }

  std::vector<PlsLoadings> loadings_path;
  std::vector<double> diag;
  for (MonthKey t = first_scored; t <= window.last; t = t.next()) {
    PlsLoadings loadings = pls_first_stage(work, work_ret, t);
    ScoredPls scored = score_pls(work, loadings, SampleWindow{window.first, t});
    diag.push_back(scored.series.values.values().back());
    if (scored.flipped) {
      // Weights must describe the sign-normalized index.
      for (auto& s : loadings.slopes) s = -s;
    }
    loadings_path.push_back(std::move(loadings));
  }
  return RecursivePls{
      FactorSeries{FactorKind::Pls,
                   MonthlySeries(first_scored, std::move(diag), "E_PLS"),
                   "cov(index, next-month EXRET) >= 0, re-anchored each month "
                   "on returns through the estimation end"},
      std::move(loadings_path)};
}

FactorSeries build_pls_index(const PredictorPanel& panel,
                             const MonthlySeries& exret, SampleWindow window,
                             bool recursive) {
  if (recursive) {
    return build_recursive_pls(panel, exret, window).series;
  }
  PredictorPanel work = align(panel, window);
  if (work.has(kExcessReturn)) work.remove(kExcessReturn);
  work.add(kExcessReturn, exret.slice(window).renamed(kExcessReturn));
  PlsLoadings loadings =
      pls_first_stage(work, work.get(kExcessReturn), window.last);
  return pls_second_stage(work, loadings, window);
}

namespace {

// First principal component of the predictor correlation matrix through
// `end`, scored over [window.first, end] and sign-anchored.
FactorSeries pca_path(const PredictorPanel& work, SampleWindow window,
                      MonthKey end) {
  const std::vector<std::string> names = work.predictor_names();
  const auto n = static_cast<Eigen::Index>(names.size());
  const int hist = months_between(window.first, end) + 1;
  const int need = std::max(kFactorMinHistory, static_cast<int>(n) + 2);
  if (hist < need) {
    throw insufficient_data_error(
        "principal component needs " + std::to_string(need) +
        " months through " + to_string(end) + ", got " + std::to_string(hist));
  }
  const Eigen::MatrixXd z =
      standardized_block(work, names, window.first, end);
  const Eigen::MatrixXd corr = (z.transpose() * z) / (hist - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success) {
    throw numerical_error(
        "eigen decomposition of the predictor correlation matrix failed "
        "through " + to_string(end));
  }
  const Eigen::VectorXd v = solver.eigenvectors().col(n - 1);
  std::vector<double> scores(static_cast<std::size_t>(hist));
  for (int r = 0; r < hist; ++r) {
    scores[static_cast<std::size_t>(r)] = z.row(r).dot(v);
  }
  SignOutcome sign =
      apply_sign_convention(scores, window.first, panel_exret(work), end);
  return FactorSeries{FactorKind::Pca,
                      MonthlySeries(window.first, std::move(scores), "E_PCA"),
                      std::move(sign.description)};
}

}  // namespace

FactorSeries build_pca_factor(const PredictorPanel& panel, SampleWindow window,
                              bool recursive) {
  PredictorPanel work = align(panel, window);
  panel_exret(work);
  const auto n = static_cast<int>(work.predictor_names().size());
  if (!recursive) {
    return pca_path(work, window, window.last);
  }
  const int need = std::max(kFactorMinHistory, n + 2);
  const MonthKey first_scored = window.first.plus(need - 1);
  if (window.last < first_scored) {
    throw insufficient_data_error(
        "window too short for a recursive principal component: needs " +
        std::to_string(need) + " months");
  }
  std::vector<double> diag;
  for (MonthKey t = first_scored; t <= window.last; t = t.next()) {
    FactorSeries path = pca_path(work, window, t);
    diag.push_back(path.values.values().back());
  }
  return FactorSeries{
      FactorKind::Pca, MonthlySeries(first_scored, std::move(diag), "E_PCA"),
      "cov(index, next-month EXRET) >= 0, re-anchored each month on returns "
      "through the estimation end"};
}

FactorSeries build_fc_predictor(const PredictorPanel& panel,
                                const MonthlySeries& exret,
                                SampleWindow window, SampleWindow initial,
                                std::vector<std::string>* warnings) {
  if (initial.length() < 120) {
    throw parameter_error(
        "forecast combination needs an initial window of at least 120 "
        "months, got " + std::to_string(initial.length()));
  }
  if (!window.contains(initial.first) || !window.contains(initial.last)) {
    throw parameter_error("initial window " + to_string(initial.first) + ".." +
                          to_string(initial.last) + " not inside sample " +
                          to_string(window.first) + ".." +
                          to_string(window.last));
  }
  PredictorPanel work = align(panel, window);
  const MonthlySeries ret = exret.slice(window);
  const std::vector<std::string> names = work.predictor_names();
  common_start(work, names);

  std::set<std::string> warned;
  std::vector<double> combo(
      static_cast<std::size_t>(months_between(initial.last, window.last) + 1));
  for (MonthKey t = initial.last; t <= window.last; t = t.next()) {
    // Pairs (x_s, R_{s+1}) for s up to t-1.
    const int pairs = months_between(window.first, t);
    double sum = 0.0;
    int used = 0;
    for (const auto& name : names) {
      const MonthlySeries& x = work.get(name);
      double x_mean = 0.0, r_mean = 0.0;
      for (int s = 0; s < pairs; ++s) {
        x_mean += x[static_cast<std::size_t>(s)];
        r_mean += ret[static_cast<std::size_t>(s + 1)];
      }
      x_mean /= pairs;
      r_mean /= pairs;
      double sxx = 0.0, sxy = 0.0;
      for (int s = 0; s < pairs; ++s) {
        const double dx = x[static_cast<std::size_t>(s)] - x_mean;
        sxx += dx * dx;
        sxy += dx * (ret[static_cast<std::size_t>(s + 1)] - r_mean);
      }
      if (!(sxx > 0.0)) {
        if (warnings && warned.insert(name).second) {
          warnings->push_back("predictor " + name +
                              " dropped from the combination at " +
                              to_string(t) + " (zero variance)");
        }
        continue;
      }
      const double b = sxy / sxx;
      const double a = r_mean - b * x_mean;
      sum += a + b * x.at(t);
      ++used;
    }
    if (used == 0) {
      throw degenerate_input_error(
          "no usable predictors in the combination at " + to_string(t));
    }
    combo[static_cast<std::size_t>(months_between(initial.last, t))] =
        sum / used;
  }
  return FactorSeries{FactorKind::Fc,
                      MonthlySeries(initial.last, std::move(combo), "E_FC"),
                      "none (combination forecast is sign-determined)"};
}

WeightPath pls_weight_path(const RecursivePls& recursive) {
  const auto& path = recursive.loadings_path;
  if (path.empty()) {
    throw parameter_error("recursive run carries no loading snapshots");
  }
  WeightPath out;
  out.start = recursive.series.values.start();
  out.names = path.front().names;
  out.rows.reserve(path.size());
  for (std::size_t r = 0; r < path.size(); ++r) {
    double denom = 0.0;
    for (double s : path[r].slopes) denom += std::abs(s);
    if (!(denom > 0.0)) {
      throw degenerate_input_error(
          "all first-stage loadings are zero at " +
          to_string(out.start.plus(static_cast<int>(r))));
    }
    std::vector<double> row(path[r].slopes.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i] = path[r].slopes[i] / denom;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace switchcast
