#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "switchcast/errors.hpp"

namespace switchcast {

// Calendar month. Total order matches calendar order; arithmetic is in
// whole months with year rollover.
struct MonthKey {
  int year = 0;
  int month = 1;  // 1..12

  static MonthKey from_yyyymm(int yyyymm) {
    const int y = yyyymm / 100;
    const int m = yyyymm % 100;
    if (m < 1 || m > 12) {
      throw parse_error("invalid yyyymm value: " + std::to_string(yyyymm));
    }
    return MonthKey{y, m};
  }

  static MonthKey from_index(int idx) {
    int y = idx / 12;
    int m = idx % 12;
    if (m < 0) {
      m += 12;
      --y;
    }
    return MonthKey{y, m + 1};
  }

  int yyyymm() const { return year * 100 + month; }

  // Months since year 0; the linear time index.
  int index() const { return year * 12 + (month - 1); }

  MonthKey plus(int months) const { return from_index(index() + months); }
  MonthKey next() const { return plus(1); }
  MonthKey prev() const { return plus(-1); }

  auto operator<=>(const MonthKey&) const = default;
};

// to - from, in months.
inline int months_between(MonthKey from, MonthKey to) {
  return to.index() - from.index();
}

inline std::string to_string(MonthKey m) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d%02d", m.year, m.month);
  return buf;
}

struct SampleWindow {
  MonthKey first;
  MonthKey last;

  SampleWindow(MonthKey f, MonthKey l) : first(f), last(l) {
    if (last < first) {
      throw parameter_error("sample window ends before it starts: " +
                            to_string(f) + ".." + to_string(l));
    }
  }

  int length() const { return months_between(first, last) + 1; }
  bool contains(MonthKey m) const { return first <= m && m <= last; }

  bool operator==(const SampleWindow&) const = default;
};

}  // namespace switchcast
