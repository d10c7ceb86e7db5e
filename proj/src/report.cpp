#include "switchcast/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "switchcast/errors.hpp"
#include "switchcast/csv.hpp"
#include "switchcast/version.hpp"

namespace switchcast {

namespace fs = std::filesystem;
using nlohmann::json;

std::string stars_from_p(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

namespace {

double pct(double fraction) { return fraction * 100.0; }

json maybe_to_json(const MaybeValue& v, bool as_pct) {
  json j;
  j["available"] = v.available;
  if (v.available) {
    j["value"] = as_pct ? pct(v.value) : v.value;
  } else {
    j["note"] = v.note;
  }
  return j;
}

json oos_to_json(const OosCell& c) {
  json j;
  j["available"] = c.available;
  if (!c.available) {
    j["note"] = c.note;
    return j;
  }
  j["months"] = c.months;
  j["r2_oos_pct"] = pct(c.r2);
  j["cw_t"] = c.cw_t;
  j["cw_p"] = c.cw_p;
  j["stars"] = stars_from_p(c.cw_p);
  j["economic"] = c.economic;
  return j;
}

json insample_to_json(const InSampleEval& ev) {
  json j;
  j["available"] = ev.available;
  j["n"] = ev.n;
  if (!ev.available) {
    j["note"] = ev.note;
    return j;
  }
  j["fell_back"] = ev.fell_back;
  j["nw_lags"] = ev.nw_lags;
  j["b0"] = ev.b0;
  j["d0"] = ev.d0;
  j["b1"] = ev.b1;
  j["g1"] = ev.g1;
  j["t_b0"] = ev.t_b0;
  j["t_d0"] = ev.t_d0;
  j["t_b1"] = ev.t_b1;
  j["t_g1"] = ev.t_g1;
  j["p_d0"] = two_sided_p(ev.t_d0);
  j["p_b1"] = two_sided_p(ev.t_b1);
  j["p_g1"] = two_sided_p(ev.t_g1);
  j["r2_adj_pct"] = pct(ev.r2_adj);
  j["r2_adj_up"] = maybe_to_json(ev.r2_adj_up, true);
  j["r2_adj_down"] = maybe_to_json(ev.r2_adj_down, true);
  j["r2_adj_expansion"] = maybe_to_json(ev.r2_adj_expansion, true);
  j["r2_adj_recession"] = maybe_to_json(ev.r2_adj_recession, true);
  return j;
}

std::string mode_name(ForecastMode mode) {
  return mode == ForecastMode::Direct ? "direct" : "regression";
}

}  // namespace

json eval_to_json(const EvalReport& report) {
  json j;
  j["sample"] = {{"first", report.sample.first.yyyymm()},
                 {"last", report.sample.last.yyyymm()}};
  j["initial"] = {{"first", report.initial.first.yyyymm()},
                  {"last", report.initial.last.yyyymm()}};
  j["tau"] = report.tau;
  j["economic_threshold_pct"] = pct(report.options.economic_threshold);
  j["subset_r2_refit"] = report.options.subset_r2_refit;
  j["models"] = json::array();
  for (const auto& m : report.models) {
    json jm;
    jm["predictor"] = m.spec.predictor;
    jm["form"] = to_string(m.spec.form);
    jm["mode"] = mode_name(m.spec.mode);
    jm["nw"] = m.spec.nw.describe();
    jm["insample"] = insample_to_json(m.insample);
    jm["oos"] = {{"full", oos_to_json(m.full)},
                 {"expansion", oos_to_json(m.expansion)},
                 {"recession", oos_to_json(m.recession)},
                 {"up", oos_to_json(m.up)},
                 {"down", oos_to_json(m.down)}};
    j["models"].push_back(std::move(jm));
  }
  return j;
}

void write_forecast_csv(const ForecastTable& table, const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    rows.push_back({to_string(r.origin), format_double(r.forecast),
                    format_double(r.benchmark), format_double(r.realized),
                    std::to_string(r.state), std::to_string(r.recession),
                    format_double(r.b0), format_double(r.d0),
                    format_double(r.b1), format_double(r.g1)});
  }
  write_csv(path,
            {"yyyymm", "forecast", "benchmark", "realized", "state",
             "recession", "b0", "d0", "b1", "g1"},
            rows);
}

ForecastFrame read_forecast_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const char* needed[] = {"yyyymm",   "forecast", "benchmark",
                          "realized", "state",    "recession"};
  for (const char* c : needed) {
    if (t.column(c) < 0) {
      throw bundle_error("forecast file " + path.string() +
                         " lacks column " + c);
    }
  }
  ForecastFrame f;
  const auto col = [&t](const char* name) {
    return static_cast<std::size_t>(t.column(name));
  };
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    f.origin.push_back(MonthKey::from_yyyymm(static_cast<int>(
        parse_cell(row[col("yyyymm")], "NaN", i + 2, "yyyymm"))));
    f.forecast.push_back(
        parse_cell(row[col("forecast")], "NaN", i + 2, "forecast"));
    f.benchmark.push_back(
        parse_cell(row[col("benchmark")], "NaN", i + 2, "benchmark"));
    f.realized.push_back(
        parse_cell(row[col("realized")], "NaN", i + 2, "realized"));
    f.state.push_back(static_cast<int>(
        parse_cell(row[col("state")], "NaN", i + 2, "state")));
    f.recession.push_back(static_cast<int>(
        parse_cell(row[col("recession")], "NaN", i + 2, "recession")));
  }
  return f;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw bundle_error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw bundle_error("cannot write " + path.string());
  }
  out << content;
}

std::string file_slug(const std::string& predictor, ModelForm form) {
  std::string s = predictor;
  for (auto& c : s) c = static_cast<char>(std::tolower(c));
  return s + "_" + to_string(form);
}

void write_state_csv(const StateSeries& states, SampleWindow window,
                     const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (MonthKey m = window.first; m <= window.last; m = m.next()) {
    rows.push_back({to_string(m), std::to_string(states.at(m))});
  }
  write_csv(path, {"yyyymm", "state"}, rows);
}

void write_recession_csv(const RecessionMask& mask, SampleWindow window,
                         const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (MonthKey m = window.first; m <= window.last; m = m.next()) {
    rows.push_back({to_string(m), std::to_string(mask.at(m))});
  }
  write_csv(path, {"yyyymm", "recession"}, rows);
}

void write_weights_csv(const WeightPath& weights, const fs::path& path) {
  std::vector<std::string> header{"yyyymm"};
  header.insert(header.end(), weights.names.begin(), weights.names.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < weights.rows.size(); ++r) {
    std::vector<std::string> row{to_string(weights.month_at(r))};
    for (double w : weights.rows[r]) row.push_back(format_double(w));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace

ReportBundle cmd_run(const fs::path& config_path,
                     const fs::path& outdir_override, std::ostream& log,
                     std::optional<int> tau_override) {
  RunConfig cfg = load_config(config_path);
  if (tau_override) {
    if (*tau_override < 1 || *tau_override > 24) {
      throw parameter_error("tau override outside [1, 24]: " +
                            std::to_string(*tau_override));
    }
    cfg.tau = *tau_override;
  }
  const fs::path outdir =
      outdir_override.empty() ? cfg.output : outdir_override;

  // Ingest.
  const std::string data_bytes = read_file(cfg.data);
  PredictorPanel panel = load_panel(cfg.data, cfg.schema());
  DeriveOptions derive;
  derive.return_scale = cfg.returns_in_percent ? 1.0 : 100.0;
  panel = with_derived_returns(std::move(panel), derive);
  const MonthlySeries& exret = panel.get(kExcessReturn);
  log << "loaded " << cfg.data.filename().string() << ": "
      << panel.predictor_names().size() << " predictors, EXRET "
      << to_string(exret.first_valid()) << ".." << to_string(exret.last())
      << "\n";

  // States from the driver column over its full file range, so the
  // lookback can reach before the sample start when the file does.
  if (!panel.has(cfg.state_driver)) {
    throw schema_error("state driver column '" + cfg.state_driver +
                       "' is not in the panel");
  }
  const StateSeries states = state_indicator(panel.get(cfg.state_driver),
                                             cfg.tau);

  std::string rec_bytes;
  std::optional<RecessionMask> recessions;
  if (!cfg.recessions.empty()) {
    rec_bytes = read_file(cfg.recessions);
    recessions = load_recession_mask(cfg.recessions, cfg.sample);
  }
  const RecessionMask* rec_ptr = recessions ? &*recessions : nullptr;

  // Factor series shared across models.
  const bool wants_pls = std::find(cfg.predictors.begin(),
                                   cfg.predictors.end(),
                                   "E_PLS") != cfg.predictors.end();
  const bool wants_pca = std::find(cfg.predictors.begin(),
                                   cfg.predictors.end(),
                                   "E_PCA") != cfg.predictors.end();
  const bool wants_fc = std::find(cfg.predictors.begin(),
                                  cfg.predictors.end(),
                                  "E_FC") != cfg.predictors.end();

  std::optional<RecursivePls> pls_recursive;
  std::optional<FactorSeries> pls_insample;
  if (wants_pls) {
    log << "building recursive index (E_PLS)\n";
    pls_recursive = build_recursive_pls(panel, exret, cfg.sample);
    pls_insample = build_pls_index(panel, exret, cfg.sample, false);
  }
  std::optional<FactorSeries> pca_recursive;
  std::optional<FactorSeries> pca_insample;
  if (wants_pca) {
    log << "building principal component (E_PCA)\n";
    pca_recursive = build_pca_factor(panel, cfg.sample, true);
    pca_insample = build_pca_factor(panel, cfg.sample, false);
  }
  std::optional<FactorSeries> fc_series;
  std::vector<std::string> fc_warnings;
  if (wants_fc) {
    log << "building combination forecast (E_FC)\n";
    fc_series = build_fc_predictor(panel, exret, cfg.sample, cfg.initial,
                                   &fc_warnings);
    for (const auto& w : fc_warnings) log << "  note: " << w << "\n";
  }

  // Backtests.
  std::vector<ModelInputs> models;
  std::vector<ModelForm> forms;
  if (cfg.run_one_state) forms.push_back(ModelForm::OneState);
  if (cfg.run_switching) forms.push_back(ModelForm::Switching);
  for (const auto& pred : cfg.predictors) {
    const auto source =
        make_source(panel, exret, pred, cfg.sample, cfg.initial);
    for (const ModelForm form : forms) {
      ModelSpec spec;
      spec.predictor = pred;
      spec.form = form;
      spec.nw = cfg.nw;
      spec.mode = (pred == "E_FC" && form == ModelForm::OneState)
                      ? ForecastMode::Direct
                      : ForecastMode::Regression;
      log << "backtesting " << pred << " (" << to_string(form) << ")\n";
      ForecastTable table = run_recursive(spec, *source, states, rec_ptr,
                                          exret, cfg.sample, cfg.initial);
      MonthlySeries insample_x =
          pred == "E_PLS"   ? pls_insample->values
          : pred == "E_PCA" ? pca_insample->values
          : pred == "E_FC"  ? fc_series->values
                            : panel.get(pred).slice(cfg.sample);
      models.push_back(
          ModelInputs{spec, std::move(insample_x), std::move(table)});
    }
  }

  EvalOptions opts;
  opts.economic_threshold = cfg.economic_threshold_pct / 100.0;
  opts.subset_r2_refit = cfg.subset_r2_refit;
  const EvalReport report = evaluate(models, states, rec_ptr, exret,
                                     cfg.sample, cfg.initial, opts);

  // Bundle.
  fs::create_directories(outdir / "series");
  fs::create_directories(outdir / "forecasts");

  std::map<std::string, std::string> file_hashes;
  const auto emit = [&](const fs::path& rel,
                        const std::function<void(const fs::path&)>& writer) {
    const fs::path full = outdir / rel;
    writer(full);
    file_hashes[rel.generic_string()] = hex64(fnv1a64(read_file(full)));
  };

  emit("eval.json", [&](const fs::path& p) {
    write_file(p, eval_to_json(report).dump(2) + "\n");
  });
  emit("series/exret.csv", [&](const fs::path& p) {
    write_series_csv(exret.slice(cfg.sample), "exret", p);
  });
  emit("series/states.csv", [&](const fs::path& p) {
    write_state_csv(states, cfg.sample, p);
  });
  if (recessions) {
    emit("series/recessions.csv", [&](const fs::path& p) {
      write_recession_csv(*recessions, cfg.sample, p);
    });
  }
  if (wants_pls) {
    emit("series/e_pls.csv", [&](const fs::path& p) {
      write_series_csv(pls_recursive->series.values, "e_pls", p);
    });
    emit("series/e_pls_insample.csv", [&](const fs::path& p) {
      write_series_csv(pls_insample->values, "e_pls", p);
    });
    emit("series/pls_weights.csv", [&](const fs::path& p) {
      write_weights_csv(pls_weight_path(*pls_recursive), p);
    });
  }
  if (wants_pca) {
    emit("series/e_pca.csv", [&](const fs::path& p) {
      write_series_csv(pca_recursive->values, "e_pca", p);
    });
    emit("series/e_pca_insample.csv", [&](const fs::path& p) {
      write_series_csv(pca_insample->values, "e_pca", p);
    });
  }
  if (wants_fc) {
    emit("series/e_fc.csv", [&](const fs::path& p) {
      write_series_csv(fc_series->values, "e_fc", p);
    });
  }
  for (const auto& mi : models) {
    emit(fs::path("forecasts") /
             (file_slug(mi.spec.predictor, mi.spec.form) + ".csv"),
         [&](const fs::path& p) { write_forecast_csv(mi.table, p); });
  }

  json manifest;
  manifest["artifact"] = "switchcast";
  manifest["version"] = kVersion;
  manifest["config_hash"] = hex64(config_hash(cfg));
  manifest["inputs"]["data"] = {{"file", cfg.data.filename().string()},
                                {"fnv64", hex64(fnv1a64(data_bytes))}};
  if (recessions) {
    manifest["inputs"]["recessions"] = {
        {"file", cfg.recessions.filename().string()},
        {"fnv64", hex64(fnv1a64(rec_bytes))}};
  }
  manifest["settings"] = {
      {"sample",
       to_string(cfg.sample.first) + ".." + to_string(cfg.sample.last)},
      {"initial",
       to_string(cfg.initial.first) + ".." + to_string(cfg.initial.last)},
      {"tau", cfg.tau},
      {"nw", cfg.nw.describe()},
      {"state_driver", cfg.state_driver},
      {"returns_in_percent", cfg.returns_in_percent},
      {"subset_r2_refit", cfg.subset_r2_refit},
      {"economic_threshold_pct", cfg.economic_threshold_pct}};
  if (!fc_warnings.empty()) manifest["warnings"] = fc_warnings;
  manifest["files"] = file_hashes;
  write_file(outdir / "manifest.json", manifest.dump(2) + "\n");

  log << "bundle written to " << outdir.string() << " ("
      << file_hashes.size() + 1 << " files)\n";

  ReportBundle bundle;
  bundle.dir = outdir;
  bundle.manifest = std::move(manifest);
  bundle.eval = eval_to_json(report);
  return bundle;
}

namespace {

json load_bundle_eval(const fs::path& bundle_dir) {
  const fs::path p = bundle_dir / "eval.json";
  if (!fs::exists(p)) {
    throw bundle_error("bundle member missing: " + p.string());
  }
  json j = json::parse(read_file(p), nullptr, false);
  if (j.is_discarded()) {
    throw bundle_error("bundle member unreadable: " + p.string());
  }
  return j;
}

std::string fmt(double v, int width, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.*f", width, prec, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string rpad_num(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// R2_oos cell, percent with CW stars, or a dash when unavailable.
std::string oos_text(const json& cell) {
  if (!cell.value("available", false)) return "--";
  return fmt(cell["r2_oos_pct"].get<double>(), 0, 2) +
         cell["stars"].get<std::string>();
}

std::string coef_text(const json& ins, const char* coef, const char* pkey) {
  return fmt(ins[coef].get<double>(), 0, 3) +
         stars_from_p(ins[pkey].get<double>());
}

void render_combination(const json& eval, std::ostream& out,
                        std::vector<std::vector<std::string>>& csv_rows) {
  const auto& models = eval["models"];
  bool any_one = false, any_sw = false;
  for (const auto& m : models) {
    if (m["form"] == "one_state") any_one = true;
    if (m["form"] == "switching") any_sw = true;
  }

  if (any_one) {
    out << "One-state predictive regressions\n";
    out << pad("predictor", 12) << rpad_num("b1", 10) << rpad_num("t(b1)", 9)
        << rpad_num("adjR2%", 10) << rpad_num("R2oos%", 12) << "\n";
    for (const auto& m : models) {
      if (m["form"] != "one_state") continue;
      const auto& ins = m["insample"];
      std::string b1 = "--", tb1 = "--", r2 = "--";
      if (ins.value("available", false)) {
        b1 = coef_text(ins, "b1", "p_b1");
        tb1 = fmt(ins["t_b1"].get<double>(), 0, 2);
        r2 = fmt(ins["r2_adj_pct"].get<double>(), 0, 2);
      }
      out << pad(m["predictor"].get<std::string>(), 12) << rpad_num(b1, 10)
          << rpad_num(tb1, 9) << rpad_num(r2, 10)
          << rpad_num(oos_text(m["oos"]["full"]), 12) << "\n";
    }
    out << "\n";
  }
  if (any_sw) {
    out << "State-switching predictive regressions\n";
    out << pad("predictor", 12) << rpad_num("d0", 10) << rpad_num("t(d0)", 9)
        << rpad_num("b1", 10) << rpad_num("t(b1)", 9) << rpad_num("g1", 10)
        << rpad_num("t(g1)", 9) << rpad_num("adjR2%", 10)
        << rpad_num("R2oos%", 12) << "\n";
    for (const auto& m : models) {
      if (m["form"] != "switching") continue;
      const auto& ins = m["insample"];
      std::string d0 = "--", td0 = "--", b1 = "--", tb1 = "--", g1 = "--",
                  tg1 = "--", r2 = "--", note;
      if (ins.value("available", false)) {
        d0 = coef_text(ins, "d0", "p_d0");
        td0 = fmt(ins["t_d0"].get<double>(), 0, 2);
        b1 = coef_text(ins, "b1", "p_b1");
        tb1 = fmt(ins["t_b1"].get<double>(), 0, 2);
        g1 = coef_text(ins, "g1", "p_g1");
        tg1 = fmt(ins["t_g1"].get<double>(), 0, 2);
        r2 = fmt(ins["r2_adj_pct"].get<double>(), 0, 2);
        if (ins.value("fell_back", false)) note = "  [one-state fit]";
      }
      out << pad(m["predictor"].get<std::string>(), 12) << rpad_num(d0, 10)
          << rpad_num(td0, 9) << rpad_num(b1, 10) << rpad_num(tb1, 9)
          << rpad_num(g1, 10) << rpad_num(tg1, 9) << rpad_num(r2, 10)
          << rpad_num(oos_text(m["oos"]["full"]), 12) << note << "\n";
    }
    out << "\n";
  }

  csv_rows.clear();
  for (const auto& m : models) {
    const auto& ins = m["insample"];
    const auto& full = m["oos"]["full"];
    std::vector<std::string> row{m["predictor"].get<std::string>(),
                                 m["form"].get<std::string>(),
                                 m["mode"].get<std::string>()};
    const bool ia = ins.value("available", false);
    const char* coefs[] = {"b0", "d0", "b1", "g1",
                           "t_b0", "t_d0", "t_b1", "t_g1", "r2_adj_pct"};
    for (const char* c : coefs) {
      row.push_back(ia ? format_double(ins[c].get<double>()) : "NaN");
    }
    const bool oa = full.value("available", false);
    row.push_back(oa ? format_double(full["r2_oos_pct"].get<double>())
                     : "NaN");
    row.push_back(oa ? format_double(full["cw_t"].get<double>()) : "NaN");
    row.push_back(oa ? format_double(full["cw_p"].get<double>()) : "NaN");
    row.push_back(oa ? full["stars"].get<std::string>() : "");
    row.push_back(oa ? (full["economic"].get<bool>() ? "1" : "0") : "");
    csv_rows.push_back(std::move(row));
  }
}

void render_states(const json& eval, std::ostream& out,
                   std::vector<std::vector<std::string>>& csv_rows) {
  const auto& models = eval["models"];
  out << "State-conditional performance\n";
  out << pad("predictor", 12) << pad("form", 11) << rpad_num("adjR2up%", 10)
      << rpad_num("adjR2dn%", 10) << rpad_num("oosExp%", 12)
      << rpad_num("oosRec%", 12) << rpad_num("oosUp%", 12)
      << rpad_num("oosDown%", 12) << "\n";
  const auto maybe_text = [](const json& v) -> std::string {
    if (!v.value("available", false)) return "--";
    return fmt(v["value"].get<double>(), 0, 2);
  };
  for (const auto& m : models) {
    const auto& ins = m["insample"];
    std::string up = "--", down = "--";
    if (ins.value("available", false)) {
      up = maybe_text(ins["r2_adj_up"]);
      down = maybe_text(ins["r2_adj_down"]);
    }
    out << pad(m["predictor"].get<std::string>(), 12)
        << pad(m["form"].get<std::string>(), 11) << rpad_num(up, 10)
        << rpad_num(down, 10) << rpad_num(oos_text(m["oos"]["expansion"]), 12)
        << rpad_num(oos_text(m["oos"]["recession"]), 12)
        << rpad_num(oos_text(m["oos"]["up"]), 12)
        << rpad_num(oos_text(m["oos"]["down"]), 12) << "\n";
  }
  out << "\n";

  csv_rows.clear();
  for (const auto& m : models) {
    const auto& ins = m["insample"];
    std::vector<std::string> row{m["predictor"].get<std::string>(),
                                 m["form"].get<std::string>()};
    const bool ia = ins.value("available", false);
    const auto maybe_num = [ia](const json& parent,
                                const char* key) -> std::string {
      if (!ia || !parent[key].value("available", false)) return "NaN";
      return format_double(parent[key]["value"].get<double>());
    };
    row.push_back(maybe_num(ins, "r2_adj_up"));
    row.push_back(maybe_num(ins, "r2_adj_down"));
    row.push_back(maybe_num(ins, "r2_adj_expansion"));
    row.push_back(maybe_num(ins, "r2_adj_recession"));
    for (const char* cond : {"expansion", "recession", "up", "down"}) {
      const auto& cell = m["oos"][cond];
      const bool oa = cell.value("available", false);
      row.push_back(oa ? format_double(cell["r2_oos_pct"].get<double>())
                       : "NaN");
      row.push_back(oa ? format_double(cell["cw_p"].get<double>()) : "NaN");
      row.push_back(oa ? cell["stars"].get<std::string>() : "");
    }
    csv_rows.push_back(std::move(row));
  }
}

}  // namespace

void cmd_table(const fs::path& bundle_dir, const std::string& which,
               std::ostream& out) {
  const json eval = load_bundle_eval(bundle_dir);
  if (!eval.contains("models") || eval["models"].empty()) {
    throw bundle_error("empty table: the bundle evaluates no models");
  }
  std::ostringstream text;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> header;
  if (which == "combination") {
    render_combination(eval, text, csv_rows);
    header = {"predictor", "form",  "mode",       "b0",
              "d0",        "b1",    "g1",         "t_b0",
              "t_d0",      "t_b1",  "t_g1",       "r2_adj_pct",
              "r2_oos_pct", "cw_t", "cw_p",       "stars",
              "economic"};
  } else if (which == "states") {
    render_states(eval, text, csv_rows);
    header = {"predictor",
              "form",
              "r2_adj_up_pct",
              "r2_adj_down_pct",
              "r2_adj_expansion_pct",
              "r2_adj_recession_pct",
              "r2_oos_expansion_pct",
              "cw_p_expansion",
              "stars_expansion",
              "r2_oos_recession_pct",
              "cw_p_recession",
              "stars_recession",
              "r2_oos_up_pct",
              "cw_p_up",
              "stars_up",
              "r2_oos_down_pct",
              "cw_p_down",
              "stars_down"};
  } else {
    throw parameter_error("unknown table '" + which +
                          "' (combination, states)");
  }
  write_file(bundle_dir / ("table_" + which + ".txt"), text.str());
  write_csv(bundle_dir / ("table_" + which + ".csv"), header, csv_rows);
  out << text.str();
}

namespace {

MonthlySeries load_bundle_series(const fs::path& bundle_dir,
                                 const std::string& rel,
                                 const std::string& label) {
  const fs::path p = bundle_dir / rel;
  if (!fs::exists(p)) {
    throw bundle_error("bundle member missing: " + p.string());
  }
  return read_series_csv(p, label);
}

std::map<int, int> load_flags(const fs::path& bundle_dir,
                              const std::string& rel,
                              const std::string& column) {
  const fs::path p = bundle_dir / rel;
  if (!fs::exists(p)) {
    throw bundle_error("bundle member missing: " + p.string());
  }
  const CsvTable t = read_csv(p);
  const int pc = t.column("yyyymm");
  const int fc = t.column(column);
  if (pc < 0 || fc < 0) {
    throw bundle_error("bundle member " + p.string() + " lacks columns");
  }
  std::map<int, int> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int ym = static_cast<int>(parse_cell(
        t.rows[i][static_cast<std::size_t>(pc)], "NaN", i + 2, "yyyymm"));
    out[ym] = static_cast<int>(parse_cell(
        t.rows[i][static_cast<std::size_t>(fc)], "NaN", i + 2, column));
  }
  return out;
}

}  // namespace

void cmd_plotdata(const fs::path& bundle_dir, const std::string& which,
                  std::ostream& out) {
  if (which == "index_vs_premium") {
    const MonthlySeries pls =
        load_bundle_series(bundle_dir, "series/e_pls_insample.csv", "e_pls");
    const MonthlySeries exret =
        load_bundle_series(bundle_dir, "series/exret.csv", "exret");
    const auto rec = load_flags(bundle_dir, "series/recessions.csv",
                                "recession");
    // Premium standardized over the plotted window so the two series
    // share a scale.
    const MonthlySeries z = standardize_through(exret, exret.last());
    std::vector<std::vector<std::string>> rows;
    for (MonthKey m = pls.start(); m <= pls.last(); m = m.next()) {
      const auto it = rec.find(m.yyyymm());
      rows.push_back({to_string(m), format_double(pls.at(m)),
                      z.in_range(m) ? format_double(z.at(m)) : "NaN",
                      it == rec.end() ? "NaN" : std::to_string(it->second)});
    }
    write_csv(bundle_dir / "plot_index_vs_premium.csv",
              {"yyyymm", "e_pls", "exret_standardized", "recession"}, rows);
    out << "wrote plot_index_vs_premium.csv (" << rows.size() << " rows)\n";
    return;
  }
  if (which == "forecasts") {
    const ForecastFrame pls =
        read_forecast_csv(bundle_dir / "forecasts/e_pls_switching.csv");
    const ForecastFrame fc =
        read_forecast_csv(bundle_dir / "forecasts/e_fc_switching.csv");
    std::map<int, std::size_t> fc_by_origin;
    for (std::size_t i = 0; i < fc.origin.size(); ++i) {
      fc_by_origin[fc.origin[i].yyyymm()] = i;
    }
    std::vector<std::vector<std::string>> rows;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < pls.origin.size(); ++i) {
      const auto it = fc_by_origin.find(pls.origin[i].yyyymm());
      if (it == fc_by_origin.end()) continue;
      const double f1 = pls.forecast[i];
      const double f2 = fc.forecast[it->second];
      // Rows dated by the month being forecast.
      rows.push_back({to_string(pls.origin[i].next()), format_double(f1),
                      format_double(f2), format_double(pls.realized[i]),
                      std::to_string(pls.recession[i])});
      sx += f1;
      sy += f2;
      sxx += f1 * f1;
      syy += f2 * f2;
      sxy += f1 * f2;
      ++n;
    }
    if (n < 2) {
      throw bundle_error("forecast files share fewer than 2 origins");
    }
    write_csv(bundle_dir / "plot_forecasts.csv",
              {"yyyymm", "f_pls", "f_fc", "realized", "recession"}, rows);
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double v1 = sxx / n - (sx / n) * (sx / n);
    const double v2 = syy / n - (sy / n) * (sy / n);
    json summary;
    summary["months"] = n;
    if (v1 > 0.0 && v2 > 0.0) {
      summary["corr_pls_fc"] = cov / std::sqrt(v1 * v2);
    } else {
      summary["corr_pls_fc"] = nullptr;
    }
    write_file(bundle_dir / "plot_forecasts_summary.json",
               summary.dump(2) + "\n");
    out << "wrote plot_forecasts.csv (" << n << " rows); corr(f_pls, f_fc)";
    if (v1 > 0.0 && v2 > 0.0) {
      out << " = " << cov / std::sqrt(v1 * v2) << "\n";
    } else {
      out << " undefined (degenerate forecasts)\n";
    }
    return;
  }
  if (which == "weights") {
    const fs::path p = bundle_dir / "series/pls_weights.csv";
    if (!fs::exists(p)) {
      throw bundle_error("bundle member missing: " + p.string());
    }
    const CsvTable t = read_csv(p);
    if (t.header.empty() || t.header.front() != "yyyymm") {
      throw bundle_error("weights file has an unexpected layout");
    }
    const double n_pred = static_cast<double>(t.header.size() - 1);
    std::vector<std::string> header = t.header;
    header.push_back("fc_weight");
    std::vector<std::vector<std::string>> rows = t.rows;
    const std::string fc_w = format_double(1.0 / n_pred);
    for (auto& row : rows) row.push_back(fc_w);
    write_csv(bundle_dir / "plot_weights.csv", header, rows);
    out << "wrote plot_weights.csv (" << rows.size() << " rows, "
        << static_cast<int>(n_pred) << " predictors, fc weight " << fc_w
        << ")\n";
    return;
  }
  throw parameter_error("unknown plot '" + which +
                        "' (index_vs_premium, forecasts, weights)");
}

}  // namespace switchcast
