#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "switchcast/backtest.hpp"
#include "switchcast/config.hpp"

namespace switchcast {

// Output bundle on disk:
//   manifest.json            run fingerprint: config hash, input and
//                            output content hashes, settings
//   eval.json                every model's in- and out-of-sample numbers
//   series/*.csv             states, recession flags, excess return,
//                            factor series, recursive index weights
//   forecasts/<model>.csv    one row per forecast origin
struct ReportBundle {
  std::filesystem::path dir;
  nlohmann::json manifest;
  nlohmann::json eval;
};

// Significance stars: *** 1%, ** 5%, * 10%.
std::string stars_from_p(double p);

nlohmann::json eval_to_json(const EvalReport& report);

void write_forecast_csv(const ForecastTable& table,
                        const std::filesystem::path& path);

// Reads the origin-dated columns back (enough for plot exports and
// audits; spec metadata is not round-tripped).
struct ForecastFrame {
  std::vector<MonthKey> origin;
  std::vector<double> forecast, benchmark, realized;
  std::vector<int> state, recession;
};
ForecastFrame read_forecast_csv(const std::filesystem::path& path);

// Full pipeline: ingest, states, factors, backtests, evaluation, bundle.
// `outdir_override` replaces the configured output directory when
// non-empty; `tau_override` replaces the configured regime lookback.
// Both overrides feed the manifest as if they had been in the config.
// Progress notes go to `log`.
ReportBundle cmd_run(const std::filesystem::path& config_path,
                     const std::filesystem::path& outdir_override,
                     std::ostream& log,
                     std::optional<int> tau_override = std::nullopt);

// Renders the combination (one-state + switching panels) or the
// state-conditional table from an existing bundle; writes a text and a
// CSV twin into the bundle and echoes the text to `out`.
void cmd_table(const std::filesystem::path& bundle_dir,
               const std::string& which, std::ostream& out);

// Emits plot-ready CSVs from an existing bundle:
//   index_vs_premium: yyyymm, e_pls, exret_standardized, recession
//   forecasts:        yyyymm (target month), f_pls, f_fc, realized,
//                     recession, plus a correlation summary
//   weights:          yyyymm, one column per predictor, fc_weight
void cmd_plotdata(const std::filesystem::path& bundle_dir,
                  const std::string& which, std::ostream& out);

}  // namespace switchcast
