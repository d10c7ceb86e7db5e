#include "switchcast/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "switchcast/errors.hpp"

namespace switchcast {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Comments start at a '#' that opens the line or follows whitespace.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

int parse_int(const std::string& value, const std::string& key) {
  int out = 0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw config_error("key '" + key + "': expected an integer, got \"" +
                       value + "\"");
  }
  return out;
}

double parse_real(const std::string& value, const std::string& key) {
  double out = 0.0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw config_error("key '" + key + "': expected a number, got \"" +
                       value + "\"");
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw config_error("key '" + key + "': expected true/false, got \"" +
                     value + "\"");
}

SampleWindow parse_window(const std::string& value, const std::string& key) {
  const auto sep = value.find("..");
  if (sep == std::string::npos) {
    throw config_error("key '" + key +
                       "': expected a window like 196001..201712, got \"" +
                       value + "\"");
  }
  try {
    const MonthKey first =
        MonthKey::from_yyyymm(parse_int(trim(value.substr(0, sep)), key));
    const MonthKey last =
        MonthKey::from_yyyymm(parse_int(trim(value.substr(sep + 2)), key));
    return SampleWindow{first, last};
  } catch (const parse_error& e) {
    throw config_error("key '" + key + "': " + e.what());
  } catch (const parameter_error& e) {
    throw config_error("key '" + key + "': " + e.what());
  }
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool known_model_name(const std::string& name) {
  if (name == "E_PLS" || name == "E_PCA" || name == "E_FC") return true;
  for (const char* c : kCanonicalPredictors) {
    if (name == c) return true;
  }
  return false;
}

bool known_column_key(const std::string& name) {
  if (name == kExcessReturn || name == kRetColumnKey ||
      name == kRfreeColumnKey) {
    return true;
  }
  for (const char* c : kCanonicalPredictors) {
    if (name == c) return true;
  }
  return false;
}

}  // namespace

CsvSchema RunConfig::schema() const {
  CsvSchema s;
  s.period_column = period_column;
  s.missing_marker = missing_marker;
  if (!columns.empty()) {
    s.columns = columns;
    return s;
  }
  // Identity map: every canonical column except the derived ERM, plus
  // the raw return pair.
  for (const char* c : kCanonicalPredictors) {
    const std::string name = c;
    if (name == "ERM") continue;
    s.columns[name] = name;
  }
  s.columns[kRetColumnKey] = kRetColumnKey;
  s.columns[kRfreeColumnKey] = kRfreeColumnKey;
  return s;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file " + path.string());
  }
  RunConfig cfg;
  cfg.config_dir = path.has_parent_path()
                       ? path.parent_path()
                       : std::filesystem::path(".");

  std::set<std::string> required_missing{"data", "output", "sample",
                                         "initial"};
  std::set<std::string> seen;
  bool in_columns = false;
  std::string line;
  int lineno = 0;
  bool forms_given = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[columns]") {
        in_columns = true;
        continue;
      }
      throw config_error("unknown section " + line + " at line " +
                         std::to_string(lineno));
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("expected key = value at line " +
                         std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw config_error("empty key at line " + std::to_string(lineno));
    }

    if (in_columns) {
      if (!known_column_key(key)) {
        throw config_error("unknown column name '" + key + "' at line " +
                           std::to_string(lineno) +
                           " (canonical predictor names, EXRET, RET or "
                           "RFREE)");
      }
      if (value.empty()) {
        throw config_error("empty column mapping for '" + key + "'");
      }
      cfg.columns[key] = value;
      continue;
    }

    if (!seen.insert(key).second) {
      throw config_error("duplicate key '" + key + "' at line " +
                         std::to_string(lineno));
    }
    required_missing.erase(key);

    if (key == "data") {
      cfg.data = cfg.config_dir / value;
    } else if (key == "recessions") {
      cfg.recessions = cfg.config_dir / value;
    } else if (key == "output") {
      cfg.output = cfg.config_dir / value;
    } else if (key == "sample") {
      cfg.sample = parse_window(value, key);
    } else if (key == "initial") {
      cfg.initial = parse_window(value, key);
    } else if (key == "tau") {
      cfg.tau = parse_int(value, key);
    } else if (key == "nw_lags") {
      if (value == "auto") {
        cfg.nw = NwLagPolicy::auto_rule();
      } else {
        const int lags = parse_int(value, key);
        if (lags < 0) {
          throw config_error("key 'nw_lags': lags must be >= 0");
        }
        cfg.nw = NwLagPolicy::fixed_lags(lags);
      }
    } else if (key == "state_driver") {
      cfg.state_driver = value;
    } else if (key == "period_column") {
      cfg.period_column = value;
    } else if (key == "missing") {
      cfg.missing_marker = value;
    } else if (key == "returns_in_percent") {
      cfg.returns_in_percent = parse_bool(value, key);
    } else if (key == "subset_r2_refit") {
      cfg.subset_r2_refit = parse_bool(value, key);
    } else if (key == "economic_threshold") {
      cfg.economic_threshold_pct = parse_real(value, key);
    } else if (key == "predictors") {
      cfg.predictors = parse_list(value);
    } else if (key == "forms") {
      forms_given = true;
      cfg.run_one_state = false;
      cfg.run_switching = false;
      for (const auto& f : parse_list(value)) {
        if (f == "one_state") {
          cfg.run_one_state = true;
        } else if (f == "switching") {
          cfg.run_switching = true;
        } else {
          throw config_error("key 'forms': unknown form '" + f +
                             "' (one_state, switching)");
        }
      }
    } else {
      throw config_error("unknown key '" + key + "' at line " +
                         std::to_string(lineno));
    }
  }

  if (!required_missing.empty()) {
    std::string missing;
    for (const auto& k : required_missing) {
      if (!missing.empty()) missing += ", ";
      missing += k;
    }
    throw config_error("missing required config keys: " + missing);
  }

  if (cfg.tau < 1 || cfg.tau > 24) {
    throw config_error("tau must be in [1, 24], got " +
                       std::to_string(cfg.tau));
  }
  if (cfg.initial.first != cfg.sample.first) {
    throw config_error("initial window must start with the sample (" +
                       to_string(cfg.initial.first) + " vs " +
                       to_string(cfg.sample.first) + ")");
  }
  if (!(cfg.initial.last < cfg.sample.last)) {
    throw config_error(
        "initial window must end before the sample does, or there are no "
        "forecast months");
  }
  if (cfg.predictors.empty()) {
    throw config_error("config lists no predictors");
  }
  for (const auto& p : cfg.predictors) {
    if (!known_model_name(p)) {
      throw config_error("unknown predictor '" + p +
                         "' (canonical predictor names, E_PLS, E_PCA, E_FC)");
    }
  }
  const bool wants_fc =
      std::find(cfg.predictors.begin(), cfg.predictors.end(), "E_FC") !=
      cfg.predictors.end();
  const int min_initial = wants_fc ? 120 : 36;
  if (cfg.initial.length() < min_initial) {
    throw config_error("initial window spans " +
                       std::to_string(cfg.initial.length()) +
                       " months; at least " + std::to_string(min_initial) +
                       " are needed" + (wants_fc ? " for E_FC" : ""));
  }
  if (forms_given && !cfg.run_one_state && !cfg.run_switching) {
    throw config_error("key 'forms' selects no forms");
  }
  if (cfg.economic_threshold_pct < 0.0) {
    throw config_error("economic_threshold must be >= 0");
  }
  return cfg;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::string blob;
  const auto kv = [&blob](const std::string& k, const std::string& v) {
    blob += k;
    blob += '=';
    blob += v;
    blob += ';';
  };
  kv("data", cfg.data.filename().string());
  kv("recessions", cfg.recessions.empty()
                       ? std::string("-")
                       : cfg.recessions.filename().string());
  kv("sample", to_string(cfg.sample.first) + ".." + to_string(cfg.sample.last));
  kv("initial",
     to_string(cfg.initial.first) + ".." + to_string(cfg.initial.last));
  kv("tau", std::to_string(cfg.tau));
  kv("nw", cfg.nw.describe());
  kv("state_driver", cfg.state_driver);
  kv("period_column", cfg.period_column);
  kv("missing", cfg.missing_marker);
  kv("returns_in_percent", cfg.returns_in_percent ? "1" : "0");
  kv("subset_r2_refit", cfg.subset_r2_refit ? "1" : "0");
  kv("economic_threshold", std::to_string(cfg.economic_threshold_pct));
  std::string preds;
  for (const auto& p : cfg.predictors) preds += p + ",";
  kv("predictors", preds);
  kv("forms", std::string(cfg.run_one_state ? "one_state," : "") +
                  (cfg.run_switching ? "switching" : ""));
  std::string cols;
  for (const auto& [k, v] : cfg.schema().columns) cols += k + ":" + v + ",";
  kv("columns", cols);
  return fnv1a64(blob);
}

}  // namespace switchcast
