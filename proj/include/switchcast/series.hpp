#pragma once

#include <string>
#include <vector>

#include "switchcast/month.hpp"

namespace switchcast {

// One value per calendar month, contiguous from `start`. Missing values
// (NaN) are tolerated only as a head run — pre-sample history in the raw
// files — never inside the series.
class MonthlySeries {
 public:
  MonthlySeries(MonthKey start, std::vector<double> values,
                std::string name = "");

  MonthKey start() const { return start_; }
  MonthKey last() const { return start_.plus(static_cast<int>(size()) - 1); }
  std::size_t size() const { return values_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<double>& values() const { return values_; }

  // First month with a non-missing value.
  MonthKey first_valid() const { return start_.plus(head_missing_); }

  double operator[](std::size_t i) const { return values_[i]; }
  double at(MonthKey m) const;
  bool in_range(MonthKey m) const { return start_ <= m && m <= last(); }

  // True when every month of `w` holds a non-missing value.
  bool covers(SampleWindow w) const;

  // Throws coverage_error when the window reaches outside the valid range.
  MonthlySeries slice(SampleWindow w) const;

  // Re-dates the series by `months` (positive = later). Values are
  // unchanged; value originally at m becomes the value at m+months.
  MonthlySeries shift(int months) const;

  MonthlySeries renamed(std::string name) const;

 private:
  MonthKey start_;
  std::vector<double> values_;
  std::string name_;
  int head_missing_ = 0;
};

// Element-wise log total return minus risk-free rate; output named EXRET.
// Both series must sit on identical months.
MonthlySeries excess_return(const MonthlySeries& log_total_return,
                            const MonthlySeries& risk_free);

// (x - mean) / sd over observations up to `end` only, applied to those
// observations; sample sd (n-1). The output never depends on values
// after `end`.
MonthlySeries standardize_through(const MonthlySeries& series, MonthKey end);

double mean_through(const MonthlySeries& series, MonthKey end);

}  // namespace switchcast
