#include "switchcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "switchcast/csv.hpp"

namespace switchcast {

void PredictorPanel::add(const std::string& name, MonthlySeries series) {
  series_.insert_or_assign(name, std::move(series));
}

bool PredictorPanel::has(const std::string& name) const {
  return series_.count(name) > 0;
}

const MonthlySeries& PredictorPanel::get(const std::string& name) const {
  const auto it = series_.find(name);
  if (it == series_.end()) {
    throw schema_error("panel has no series named '" + name + "'");
  }
  return it->second;
}

void PredictorPanel::remove(const std::string& name) { series_.erase(name); }

std::vector<std::string> PredictorPanel::names() const {
  std::vector<std::string> out;
  out.reserve(series_.size());
  for (const auto& [name, _] : series_) out.push_back(name);
  return out;
}

std::vector<std::string> PredictorPanel::predictor_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : series_) {
    if (name != kExcessReturn) out.push_back(name);
  }
  return out;
}

PredictorPanel load_panel(const std::filesystem::path& path,
                          const CsvSchema& schema) {
  const CsvTable table = read_csv(path);
  const int period_col = table.column(schema.period_column);
  if (period_col < 0) {
    throw schema_error("missing period column '" + schema.period_column +
                       "' in " + path.string());
  }
  struct Mapped {
    std::string name;
    int col;
  };
  std::vector<Mapped> mapped;
  for (const auto& [name, column] : schema.columns) {
    const int col = table.column(column);
    if (col < 0) {
      throw schema_error("missing column '" + column + "' (mapped to " + name +
                         ") in " + path.string());
    }
    mapped.push_back({name, col});
  }
  if (table.rows.empty()) {
    throw ingestion_error("no data rows in " + path.string());
  }

  std::vector<MonthKey> months;
  months.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cell = table.rows[r][static_cast<std::size_t>(period_col)];
    const double raw =
        parse_cell(cell, schema.missing_marker, r + 2, schema.period_column);
    if (std::isnan(raw) || raw != std::floor(raw)) {
      throw parse_error("bad period cell '" + cell + "' at row " +
                        std::to_string(r + 2));
    }
    const MonthKey m = MonthKey::from_yyyymm(static_cast<int>(raw));
    if (!months.empty()) {
      if (m <= months.back()) {
        throw ingestion_error("months not strictly increasing at row " +
                              std::to_string(r + 2) + " (" + to_string(m) +
                              " after " + to_string(months.back()) + ")");
      }
      if (m != months.back().next()) {
        throw ingestion_error("month gap at row " + std::to_string(r + 2) +
                              " (" + to_string(months.back()) + " -> " +
                              to_string(m) + ")");
      }
    }
    months.push_back(m);
  }

  PredictorPanel panel;
  for (const auto& [name, col] : mapped) {
    std::vector<double> values(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      values[r] = parse_cell(table.rows[r][static_cast<std::size_t>(col)],
                             schema.missing_marker, r + 2,
                             table.header[static_cast<std::size_t>(col)]);
    }
    panel.add(name, MonthlySeries(months.front(), std::move(values), name));
  }
  return panel;
}

PredictorPanel align(const PredictorPanel& panel, SampleWindow window) {
  PredictorPanel out;
  for (const auto& [name, series] : panel.series()) {
    if (!series.covers(window)) {
      throw coverage_error(
          "series '" + name + "' (" + to_string(series.first_valid()) + ".." +
          to_string(series.last()) + ") does not cover window " +
          to_string(window.first) + ".." + to_string(window.last));
    }
    out.add(name, series.slice(window));
  }
  return out;
}

PredictorPanel with_derived_returns(PredictorPanel panel,
                                    const DeriveOptions& opts) {
  MonthlySeries exret = [&] {
    if (panel.has(kExcessReturn)) {
      return panel.get(kExcessReturn);
    }
    if (!panel.has(kRetColumnKey) || !panel.has(kRfreeColumnKey)) {
      throw schema_error(
          "need either an EXRET mapping or both RET and RFREE mappings to "
          "construct the excess return");
    }
    return excess_return(panel.get(kRetColumnKey), panel.get(kRfreeColumnKey));
  }();
  if (opts.return_scale != 1.0) {
    std::vector<double> scaled(exret.values());
    for (auto& v : scaled) v *= opts.return_scale;
    exret = MonthlySeries(exret.start(), std::move(scaled), kExcessReturn);
  }
  panel.remove(kRetColumnKey);
  panel.remove(kRfreeColumnKey);
  panel.add(kExcessReturn, exret.renamed(kExcessReturn));
  panel.add("ERM", exret.shift(1).renamed("ERM"));
  return panel;
}

void write_panel_csv(const PredictorPanel& panel,
                     const std::filesystem::path& path) {
  if (panel.size() == 0) {
    throw bundle_error("cannot write an empty panel");
  }
  MonthKey first = panel.series().begin()->second.start();
  MonthKey last = panel.series().begin()->second.last();
  for (const auto& [_, s] : panel.series()) {
    first = std::min(first, s.start());
    last = std::max(last, s.last());
  }
  std::vector<std::string> header{"yyyymm"};
  for (const auto& name : panel.names()) header.push_back(name);

  std::vector<std::vector<std::string>> rows;
  for (MonthKey m = first; m <= last; m = m.next()) {
    std::vector<std::string> row{to_string(m)};
    for (const auto& [_, s] : panel.series()) {
      row.push_back(s.in_range(m) ? format_double(s.at(m)) : "NaN");
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_series_csv(const MonthlySeries& series, const std::string& label,
                      const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (MonthKey m = series.start(); m <= series.last(); m = m.next()) {
    rows.push_back({to_string(m), format_double(series.at(m))});
  }
  write_csv(path, {"yyyymm", label}, rows);
}

MonthlySeries read_series_csv(const std::filesystem::path& path,
                              const std::string& label) {
  CsvSchema schema;
  schema.columns[label] = label;
  const PredictorPanel p = load_panel(path, schema);
  return p.get(label);
}

}  // namespace switchcast
