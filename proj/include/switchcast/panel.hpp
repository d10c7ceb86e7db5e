#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "switchcast/series.hpp"

namespace switchcast {

// Canonical predictor names, in the conventional display order.
inline constexpr std::array<const char*, 16> kCanonicalPredictors = {
    "DP",  "DY",  "EP",  "DE",  "SVAR", "BM",  "NTIS", "TBL",
    "LTY", "LTR", "TMS", "DFY", "DFR",  "INFL", "ERM",  "EBM"};

inline constexpr const char* kExcessReturn = "EXRET";

// Aligned collection of named monthly series. Storage is an ordered map,
// so iteration (and anything derived from it) is deterministic.
class PredictorPanel {
 public:
  void add(const std::string& name, MonthlySeries series);
  bool has(const std::string& name) const;
  const MonthlySeries& get(const std::string& name) const;
  void remove(const std::string& name);

  std::size_t size() const { return series_.size(); }

  // All names, sorted.
  std::vector<std::string> names() const;
  // Names excluding EXRET: the regressor set for factor construction.
  std::vector<std::string> predictor_names() const;

  const std::map<std::string, MonthlySeries>& series() const {
    return series_;
  }

 private:
  std::map<std::string, MonthlySeries> series_;
};

// Column-name map for ingestion: canonical name -> file column. The two
// reserved keys RET (log total return) and RFREE build EXRET when EXRET
// itself is not mapped directly.
struct CsvSchema {
  std::string period_column = "yyyymm";
  std::string missing_marker = "NaN";
  std::map<std::string, std::string> columns;
};

inline constexpr const char* kRetColumnKey = "RET";
inline constexpr const char* kRfreeColumnKey = "RFREE";

// Reads every mapped column as a MonthlySeries. Rows must be one per
// month, strictly increasing and contiguous. Values pass through
// untouched; trimming happens at alignment.
PredictorPanel load_panel(const std::filesystem::path& path,
                          const CsvSchema& schema);

// Trims every series to exactly `window`. A series that does not cover
// the window is a coverage error naming the series.
PredictorPanel align(const PredictorPanel& panel, SampleWindow window);

struct DeriveOptions {
  // Multiplier applied to EXRET at construction; 100 turns decimal
  // returns into percent per month.
  double return_scale = 100.0;
};

// Builds EXRET (directly mapped, or RET - RFREE), scales it, and derives
// ERM as EXRET lagged one month. RET/RFREE columns are dropped afterwards.
PredictorPanel with_derived_returns(PredictorPanel panel,
                                    const DeriveOptions& opts);

// Emits the panel as a yyyymm-indexed CSV over the union of the series
// ranges; reloading reproduces values bit-for-bit.
void write_panel_csv(const PredictorPanel& panel,
                     const std::filesystem::path& path);

void write_series_csv(const MonthlySeries& series, const std::string& label,
                      const std::filesystem::path& path);
MonthlySeries read_series_csv(const std::filesystem::path& path,
                              const std::string& label);

}  // namespace switchcast
