// Command-line front end.
//
//   switchcast run      --config FILE [--outdir DIR] [--tau N]
//   switchcast table    --bundle DIR --which combination|states
//   switchcast plotdata --bundle DIR --which index_vs_premium|forecasts|weights
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or usage,
// 3 data (ingestion, coverage, bundle members), 4 numerical.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "switchcast/errors.hpp"
#include "switchcast/report.hpp"
#include "switchcast/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"state-switching equity premium forecasting"};
  app.set_version_flag("--version", switchcast::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir;
  int tau = 0;
  auto* run = app.add_subcommand(
      "run", "ingest data, run every configured backtest, write a bundle");
  run->add_option("--config,-c", config_path, "run configuration file")
      ->required();
  run->add_option("--outdir,-o", outdir,
                  "override the configured output directory");
  run->add_option("--tau", tau,
                  "override the regime lookback, in months")
      ->check(CLI::Range(3, 12));

  std::string bundle;
  std::string table_which = "combination";
  auto* table = app.add_subcommand(
      "table", "render a results table from an existing bundle");
  table->add_option("--bundle,-b", bundle, "bundle directory")->required();
  table->add_option("--which,-w", table_which, "which table")
      ->check(CLI::IsMember({"combination", "states"}));

  std::string plot_which = "index_vs_premium";
  auto* plot = app.add_subcommand(
      "plotdata", "emit plot-ready CSVs from an existing bundle");
  plot->add_option("--bundle,-b", bundle, "bundle directory")->required();
  plot->add_option("--which,-w", plot_which, "which export")
      ->check(CLI::IsMember({"index_vs_premium", "forecasts", "weights"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (outdir.empty()) {
        if (const char* env = std::getenv("SWITCHCAST_OUTDIR")) {
          outdir = env;
        }
      }
      std::optional<int> tau_override;
      if (run->count("--tau") > 0) tau_override = tau;
      switchcast::cmd_run(config_path, outdir, std::cout, tau_override);
    } else if (*table) {
      switchcast::cmd_table(bundle, table_which, std::cout);
    } else if (*plot) {
      switchcast::cmd_plotdata(bundle, plot_which, std::cout);
    }
  } catch (const switchcast::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
