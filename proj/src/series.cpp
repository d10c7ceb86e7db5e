#include "switchcast/series.hpp"

#include <cmath>

namespace switchcast {

MonthlySeries::MonthlySeries(MonthKey start, std::vector<double> values,
                             std::string name)
    : start_(start), values_(std::move(values)), name_(std::move(name)) {
  if (values_.empty()) {
    throw parameter_error("series '" + name_ + "' has no observations");
  }
  std::size_t i = 0;
  while (i < values_.size() && std::isnan(values_[i])) ++i;
  if (i == values_.size()) {
    throw degenerate_input_error("series '" + name_ + "' is entirely missing");
  }
  head_missing_ = static_cast<int>(i);
  for (; i < values_.size(); ++i) {
    if (std::isnan(values_[i])) {
      throw ingestion_error("series '" + name_ + "' has an internal gap at " +
                            to_string(start_.plus(static_cast<int>(i))));
    }
  }
}

double MonthlySeries::at(MonthKey m) const {
  if (!in_range(m)) {
    throw coverage_error("series '" + name_ + "' does not cover " +
                         to_string(m));
  }
  return values_[static_cast<std::size_t>(months_between(start_, m))];
}

bool MonthlySeries::covers(SampleWindow w) const {
  return first_valid() <= w.first && w.last <= last();
}

MonthlySeries MonthlySeries::slice(SampleWindow w) const {
  if (!covers(w)) {
    throw coverage_error("series '" + name_ + "' (" +
                         to_string(first_valid()) + ".." + to_string(last()) +
                         ") does not cover window " + to_string(w.first) +
                         ".." + to_string(w.last));
  }
  const auto from = static_cast<std::size_t>(months_between(start_, w.first));
  std::vector<double> out(values_.begin() + from,
                          values_.begin() + from + w.length());
  return MonthlySeries(w.first, std::move(out), name_);
}

MonthlySeries MonthlySeries::shift(int months) const {
  return MonthlySeries(start_.plus(months), values_, name_);
}

MonthlySeries MonthlySeries::renamed(std::string name) const {
  return MonthlySeries(start_, values_, std::move(name));
}

MonthlySeries excess_return(const MonthlySeries& log_total_return,
                            const MonthlySeries& risk_free) {
  if (log_total_return.start() != risk_free.start() ||
      log_total_return.size() != risk_free.size()) {
    throw alignment_error(
        "excess_return: return and risk-free series are misaligned (" +
        to_string(log_total_return.start()) + " n=" +
        std::to_string(log_total_return.size()) + " vs " +
        to_string(risk_free.start()) + " n=" +
        std::to_string(risk_free.size()) + ")");
  }
  std::vector<double> out(log_total_return.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = log_total_return[i] - risk_free[i];
  }
  return MonthlySeries(log_total_return.start(), std::move(out), "EXRET");
}

MonthlySeries standardize_through(const MonthlySeries& series, MonthKey end) {
  if (!series.in_range(end)) {
    throw coverage_error("standardize_through: series '" + series.name() +
                         "' does not reach " + to_string(end));
  }
  if (series.first_valid() > series.start()) {
    throw coverage_error("standardize_through: series '" + series.name() +
                         "' has missing head values; align first");
  }
  const int n = months_between(series.start(), end) + 1;
  if (n < 2) {
    throw insufficient_data_error(
        "standardize_through: need at least 2 observations, got " +
        std::to_string(n));
  }
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += series[i];
  mean /= n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = series[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0.0)) {
    throw degenerate_input_error("standardize_through: series '" +
                                 series.name() + "' has zero variance through " +
                                 to_string(end));
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = (series[i] - mean) / sd;
  return MonthlySeries(series.start(), std::move(out), series.name());
}

double mean_through(const MonthlySeries& series, MonthKey end) {
  if (!series.in_range(end)) {
    throw coverage_error("mean_through: series '" + series.name() +
                         "' does not reach " + to_string(end));
  }
  const int n = months_between(series.start(), end) + 1;
  if (n < 1 || series.first_valid() > series.start()) {
    throw insufficient_data_error("mean_through: no usable observations");
  }
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += series[i];
  return mean / n;
}

}  // namespace switchcast
