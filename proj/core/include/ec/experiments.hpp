// Named experiments shared by the command line runner and the acceptance
// binary. Each returns metrics, an optional table and a pass flag.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ec {

struct ExperimentParams {
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<double> box;  // L, the box is [-pi L, pi L)^3
  std::optional<double> dt;
  std::optional<double> t_end;
  std::map<std::string, std::string> overrides;
  std::string out_dir;  // solver snapshots, empty = none

  double get(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
};

struct Metric {
  std::string name;
  double value = 0.0;
};

struct ExperimentResult {
  std::string name;
  bool pass = true;
  bool has_threshold = true;
  std::string summary;
  std::vector<Metric> metrics;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
  double seconds = 0.0;

  void metric(const std::string& key, double v) { metrics.push_back({key, v}); }
  double value(const std::string& key) const;
};

ExperimentResult spectral_identities(const ExperimentParams& p);
ExperimentResult multiplier_audit_run(const ExperimentParams& p);
ExperimentResult nonlinearity_consistency_run(const ExperimentParams& p);
ExperimentResult vector_field_identities(const ExperimentParams& p);
ExperimentResult linear_decay(const ExperimentParams& p);
ExperimentResult slab_profile(const ExperimentParams& p);
ExperimentResult hq_dispersion(const ExperimentParams& p);
ExperimentResult vp_dispersion(const ExperimentParams& p);
ExperimentResult wavepacket(const ExperimentParams& p);
ExperimentResult telescope_audit(const ExperimentParams& p);
ExperimentResult commutator_probe(const ExperimentParams& p);
ExperimentResult farfield(const ExperimentParams& p);
ExperimentResult nonlinear_smalldata(const ExperimentParams& p);
ExperimentResult integrator_order(const ExperimentParams& p);
ExperimentResult norms_report(const ExperimentParams& p);

using ExperimentFn = std::function<ExperimentResult(const ExperimentParams&)>;

// CLI presets by name.
const std::map<std::string, ExperimentFn>& presets();

}  // namespace ec
