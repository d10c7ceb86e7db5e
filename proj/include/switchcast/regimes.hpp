#pragma once

#include <filesystem>
#include <vector>

#include "switchcast/series.hpp"

namespace switchcast {

// Binary market-state indicator: S_t = 1 (down state) when the term
// spread was <= 0 at least once in the preceding tau months, 0 otherwise.
struct StateSeries {
  MonthKey start;
  std::vector<int> states;
  int tau = 0;

  MonthKey last() const {
    return start.plus(static_cast<int>(states.size()) - 1);
  }
  int at(MonthKey m) const;
  StateSeries slice(SampleWindow w) const;
};

// S_t depends only on tms strictly before t; months with fewer than tau
// preceding observations use the available prefix.
StateSeries state_indicator(const MonthlySeries& tms, int tau);

// Ex-post recession flags, a user-supplied input aligned to the window.
struct RecessionMask {
  MonthKey start;
  std::vector<int> flags;

  MonthKey last() const {
    return start.plus(static_cast<int>(flags.size()) - 1);
  }
  int at(MonthKey m) const;
};

// CSV with columns yyyymm, recession (0/1); every month of `window`
// must be present.
RecessionMask load_recession_mask(const std::filesystem::path& path,
                                  SampleWindow window);

}  // namespace switchcast
