// Batch runner: one preset per process, JSON report plus CSV table.
//
//   ec-run --preset linear-decay --seed 1 --out runs/ld
//   ec-run --config run.cfg --override sigma=1.5
//
// Exit status: 0 on success, 1 if the preset's threshold fails, 2 on usage
// errors, 3 on runtime errors.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ec/experiments.hpp"
#include "ec/localization.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  std::string preset;
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<double> box, dt, t_end;
  std::string out;
  std::vector<std::string> overrides;
  std::string config;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::pair<std::string, std::string> split_kv(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("expected key=value, got '" + s + "'");
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw CLI::ValidationError(key + ": not a number: '" + v + "'");
  return d;
}

// Config file lines are key=value; '#' starts a comment. Command line flags win.
void apply_config(Options& o, const CLI::App& app) {
  std::ifstream in(o.config);
  if (!in) throw CLI::ValidationError("cannot read config file " + o.config);
  std::string line;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto [k, v] = split_kv(line);
    std::replace(k.begin(), k.end(), '_', '-');
    const bool given = app.count("--" + k) > 0;
    if (k == "preset") {
      if (!given) o.preset = v;
    } else if (k == "seed") {
      if (!given) o.seed = std::uint64_t(to_double(k, v));
    } else if (k == "n") {
      if (!given) o.n = int(to_double(k, v));
    } else if (k == "box") {
      if (!given) o.box = to_double(k, v);
    } else if (k == "dt") {
      if (!given) o.dt = to_double(k, v);
    } else if (k == "t-end") {
      if (!given) o.t_end = to_double(k, v);
    } else if (k == "out") {
      if (!given) o.out = v;
    } else {
      extra.push_back(line);
    }
  }
  // Command line overrides come last so they take precedence.
  extra.insert(extra.end(), o.overrides.begin(), o.overrides.end());
  o.overrides = std::move(extra);
}

json to_json(const Options& o, const ec::ExperimentParams& p, const ec::ExperimentResult& r) {
  json params;
  params["seed"] = p.seed;
  if (p.n) params["n"] = *p.n;
  if (p.box) params["box"] = *p.box;
  if (p.dt) params["dt"] = *p.dt;
  if (p.t_end) params["t_end"] = *p.t_end;
  params["overrides"] = json::object();
  for (const auto& [k, v] : p.overrides) params["overrides"][k] = v;

  json metrics = json::array();
  for (const auto& m : r.metrics) metrics.push_back({{"name", m.name}, {"value", m.value}});
  json j;
  j["schema_version"] = kSchemaVersion;
  j["preset"] = o.preset;
  j["experiment"] = r.name;
  j["params"] = params;
  j["has_threshold"] = r.has_threshold;
  j["pass"] = r.pass;
  j["summary"] = r.summary;
  j["metrics"] = metrics;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  j["notes"] = r.notes;
  return j;
}

// Table rows, then the fitted exponent (if any) in its own column on the last row.
void write_csv(const std::string& path, const ec::ExperimentResult& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  const auto fit = std::find_if(r.metrics.begin(), r.metrics.end(),
                                [](const ec::Metric& m) { return m.name == "exponent"; });
  for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
  if (fit != r.metrics.end()) out << ",fitted_exponent";
  out << "\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (std::size_t c = 0; c < r.rows[i].size(); ++c) out << (c ? "," : "") << r.rows[i][c];
    if (fit != r.metrics.end()) {
      out << ",";
      if (i + 1 == r.rows.size()) out << fit->value;
    }
    out << "\n";
  }
}

std::string preset_list() {
  std::string s;
  for (const auto& [name, fn] : ec::presets()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a named Euler-Coriolis experiment and emit JSON/CSV reports."};
  Options o;
  app.add_option("--preset", o.preset, "one of: " + preset_list());
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--n", o.n, "grid points per axis");
  app.add_option("--box", o.box, "box half period L, box is [-pi L, pi L)^3");
  app.add_option("--dt", o.dt, "time step");
  app.add_option("--t-end", o.t_end, "final time");
  app.add_option("--out", o.out, "output directory (report.json, table.csv, snapshots/)");
  app.add_option("--override", o.overrides, "experiment parameter key=value (repeatable)");
  app.add_option("--config", o.config, "key=value run file")->check(CLI::ExistingFile);
  try {
    app.parse(argc, argv);
    if (!o.config.empty()) apply_config(o, app);
    if (o.preset.empty()) throw CLI::RequiredError("--preset");
    if (!ec::presets().count(o.preset))
      throw CLI::ValidationError("--preset", "unknown preset '" + o.preset + "'; expected one of: " + preset_list());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ec::ExperimentParams p;
  p.seed = o.seed;
  p.n = o.n;
  p.box = o.box;
  p.dt = o.dt;
  p.t_end = o.t_end;
  try {
    for (const auto& kv : o.overrides) {
      const auto [k, v] = split_kv(kv);
      if (k.find("selector") != std::string::npos) ec::parse_selector(v);
      p.overrides[k] = v;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!o.out.empty()) {
      fs::create_directories(o.out);
      p.out_dir = o.out;
    }
    const ec::ExperimentResult r = ec::presets().at(o.preset)(p);
    const std::string report = to_json(o, p, r).dump(2) + "\n";
    if (o.out.empty()) {
      std::cout << report;
    } else {
      std::ofstream js(fs::path(o.out) / "report.json");
      if (!(js << report)) throw std::runtime_error("cannot write " + (fs::path(o.out) / "report.json").string());
      if (!r.columns.empty()) write_csv((fs::path(o.out) / "table.csv").string(), r);
    }
    std::cerr << r.name << ": " << (r.has_threshold ? (r.pass ? "PASS" : "FAIL") : "done") << "  " << r.summary
              << "\n";
    return r.has_threshold && !r.pass ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
