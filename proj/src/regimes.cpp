#include "switchcast/regimes.hpp"

#include <cmath>
#include <string>

#include "switchcast/csv.hpp"
#include "switchcast/errors.hpp"

namespace switchcast {

int StateSeries::at(MonthKey m) const {
  if (m < start || last() < m) {
    throw coverage_error("state series does not cover " + to_string(m));
  }
  return states[static_cast<std::size_t>(months_between(start, m))];
}

StateSeries StateSeries::slice(SampleWindow w) const {
  if (w.first < start || last() < w.last) {
    throw coverage_error("state slice " + to_string(w.first) + ".." +
                         to_string(w.last) + " outside " +
                         to_string(start) + ".." + to_string(last()));
  }
  auto off = static_cast<std::size_t>(months_between(start, w.first));
  auto len = static_cast<std::size_t>(w.length());
  return StateSeries{w.first,
                     std::vector<int>(states.begin() + static_cast<long>(off),
                                      states.begin() + static_cast<long>(off + len)),
                     tau};
}

StateSeries state_indicator(const MonthlySeries& tms, int tau) {
  if (tau < 1) {
    throw parameter_error("state lookback must be >= 1, got " +
                          std::to_string(tau));
  }
  const auto n = tms.size();
  if (n < static_cast<std::size_t>(tau) + 1) {
    throw insufficient_data_error(
        "term spread series too short for lookback " + std::to_string(tau) +
        ": " + std::to_string(n) + " months");
  }
  const auto& v = tms.values();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(v[i])) {
      throw coverage_error("term spread missing at " +
                           to_string(tms.start().plus(static_cast<int>(i))));
    }
  }
  std::vector<int> s(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    // window is the tau months strictly before t, truncated at the start
    std::size_t lo = t > static_cast<std::size_t>(tau)
                         ? t - static_cast<std::size_t>(tau)
                         : 0;
    for (std::size_t i = lo; i < t; ++i) {
      if (v[i] <= 0.0) {
        s[t] = 1;
        break;
      }
    }
  }
  return StateSeries{tms.start(), std::move(s), tau};
}

int RecessionMask::at(MonthKey m) const {
  if (m < start || last() < m) {
    throw coverage_error("recession mask does not cover " + to_string(m));
  }
  return flags[static_cast<std::size_t>(months_between(start, m))];
}

RecessionMask load_recession_mask(const std::filesystem::path& path,
                                  SampleWindow window) {
  CsvTable table = read_csv(path);
  int pcol = table.column("yyyymm");
  int rcol = table.column("recession");
  if (pcol < 0 || rcol < 0) {
    throw schema_error("recession file " + path.string() +
                       " must have columns yyyymm, recession");
  }
  std::vector<int> flags(static_cast<std::size_t>(window.length()), -1);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& pcell = table.rows[r][static_cast<std::size_t>(pcol)];
    const double raw = parse_cell(pcell, "NaN", r + 2, "yyyymm");
    if (std::isnan(raw) || raw != static_cast<int>(raw)) {
      throw parse_error("bad period cell '" + pcell + "' at row " +
                        std::to_string(r + 2));
    }
    MonthKey m = MonthKey::from_yyyymm(static_cast<int>(raw));
    if (!window.contains(m)) continue;
    const std::string& cell = table.rows[r][static_cast<std::size_t>(rcol)];
    int flag;
    if (cell == "0") {
      flag = 0;
    } else if (cell == "1") {
      flag = 1;
    } else {
      throw parse_error("recession flag at row " + std::to_string(r + 2) +
                        " must be 0 or 1, got \"" + cell + "\"");
    }
    flags[static_cast<std::size_t>(months_between(window.first, m))] = flag;
  }
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] < 0) {
      throw coverage_error(
          "recession file missing " +
          to_string(window.first.plus(static_cast<int>(i))));
    }
  }
  return RecessionMask{window.first, std::move(flags)};
}

}  // namespace switchcast
