#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "switchcast/month.hpp"
#include "switchcast/ols.hpp"
#include "switchcast/panel.hpp"

namespace switchcast {

// Run settings, as parsed from a key = value file. Windows use the form
// 196001..201712; a [columns] section maps canonical predictor names to
// file columns (identity for every canonical column when omitted).
struct RunConfig {
  std::filesystem::path config_dir;  // directory the paths resolve against

  std::filesystem::path data;
  std::filesystem::path recessions;  // empty: no recession conditionals
  std::filesystem::path output;

  SampleWindow sample{MonthKey{0, 1}, MonthKey{0, 1}};
  SampleWindow initial{MonthKey{0, 1}, MonthKey{0, 1}};
  int tau = 9;
  NwLagPolicy nw = NwLagPolicy::auto_rule();
  std::string state_driver = "TMS";
  std::string period_column = "yyyymm";
  std::string missing_marker = "NaN";
  bool returns_in_percent = false;
  bool subset_r2_refit = false;
  double economic_threshold_pct = 0.5;
  std::vector<std::string> predictors;
  bool run_one_state = true;
  bool run_switching = true;
  std::map<std::string, std::string> columns;

  CsvSchema schema() const;
};

// Parses and validates; throws config_error on unknown keys, missing
// required keys, tau outside [1, 24], or windows that are not nested.
RunConfig load_config(const std::filesystem::path& path);

// Semantic fingerprint (FNV-1a 64) over everything that affects results;
// the output directory is deliberately excluded.
std::uint64_t config_hash(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace switchcast
