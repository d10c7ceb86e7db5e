// Regenerates the bundled demo dataset:
//   data/synthetic_panel.csv       monthly predictor panel + RET/RFREE
//   data/synthetic_recessions.csv  yyyymm,recession flags
//
// The draw is seeded, so the files are bit-for-bit reproducible. Before
// writing, the tool re-derives the regime states exactly as the pipeline
// will and refuses to emit a dataset whose evaluation window would be
// degenerate (too few recession months, or a regime that almost never
// occurs).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "switchcast/csv.hpp"
#include "switchcast/panel.hpp"
#include "switchcast/regimes.hpp"
#include "switchcast/synth.hpp"

namespace fs = std::filesystem;
using namespace switchcast;

int main(int argc, char** argv) {
  fs::path outdir = "data";
  if (argc > 1) outdir = argv[1];

  synth::DatasetParams params;
  const synth::SyntheticDataset ds = synth::draw_dataset(params);

  // The checks mirror the demo config: sample 196001..201712 with a
  // 196001..197912 initial window.
  const SampleWindow sample{MonthKey{1960, 1}, MonthKey{2017, 12}};
  const MonthKey first_origin{1979, 12};

  const StateSeries states =
      state_indicator(ds.file_panel.get("TMS"), params.tau);
  int down_origins = 0, up_origins = 0;
  for (MonthKey t = first_origin; t < sample.last; t = t.next()) {
    (states.at(t) == 1 ? down_origins : up_origins)++;
  }
  int recession_months = 0;
  for (MonthKey m = first_origin.next(); m <= sample.last; m = m.next()) {
    recession_months += ds.recession[static_cast<std::size_t>(
        months_between(ds.start, m))];
  }
  std::cerr << "evaluation origins: " << up_origins << " up, "
            << down_origins << " down; recession target months: "
            << recession_months << "\n";
  if (down_origins < 8 || up_origins < 8) {
    std::cerr << "degenerate draw: a regime has fewer than 8 origins\n";
    return 1;
  }
  if (recession_months < 12) {
    std::cerr << "degenerate draw: fewer than 12 recession months\n";
    return 1;
  }

  fs::create_directories(outdir);
  write_panel_csv(ds.file_panel, outdir / "synthetic_panel.csv");

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < static_cast<int>(ds.recession.size()); ++i) {
    rows.push_back({to_string(ds.start.plus(i)),
                    std::to_string(ds.recession[static_cast<std::size_t>(i)])});
  }
  write_csv(outdir / "synthetic_recessions.csv", {"yyyymm", "recession"},
            rows);

  std::cout << "wrote " << (outdir / "synthetic_panel.csv").string() << " ("
            << ds.file_panel.size() << " columns, "
            << ds.recession.size() << " months)\n";
  std::cout << "wrote " << (outdir / "synthetic_recessions.csv").string()
            << "\n";
  return 0;
}
