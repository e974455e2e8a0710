// Time integration of the Euler-Coriolis system in velocity or profile form.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ec/norms.hpp"
#include "ec/profiles.hpp"
#include "ec/spectral.hpp"

namespace ec {

enum class Formulation { velocity, profile };
enum class Integrator { rk4_lawson, rk4_plain };

struct SolverConfig {
  double dt = 0.1;
  double t_end = 1.0;
  double t_start = 0.0;
  Formulation formulation = Formulation::profile;
  Integrator integrator = Integrator::rk4_lawson;
  bool dealias = true;
  bool linear = false;         // drop the advection term
  int monitor_stride = 1;      // steps between trajectory rows
  int snapshot_stride = 0;     // steps between snapshot files, 0 = none
  std::string snapshot_dir;    // where snapshots go
  bool keep_snapshots = false; // keep velocity snapshots in the record
  double scatter_interval = 0.0;  // record |f(t + s) - f(t)| every s, 0 = off
  std::uint64_t seed = 1;
};

enum class InitialKind { gaussian_smalldata, beltrami, random_bandlimited };

struct InitialData {
  InitialKind kind = InitialKind::gaussian_smalldata;
  double amplitude = 0.01;  // sup |u0|
  double width = 0.0;       // Gaussian width; 0 selects L / 8
  double band = 0.0;        // max |xi|; 0 selects 4 / L (random_bandlimited, beltrami)
  std::uint64_t seed = 1;
};

VectorField make_initial(const Grid& g, const InitialData& d);

struct TrajectoryRow {
  double t = 0.0;
  double l2 = 0.0;
  double h4 = 0.0;
  double sup = 0.0;
  double div = 0.0;
  double helicity = 0.0;
  double dtf = 0.0;  // |d_t f|_{L2}, profile form only
};

struct ScatterSample {
  double t1 = 0.0, t2 = 0.0;
  double residual = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  std::vector<ScatterSample> scatter;
  std::vector<Snapshot> snapshots;
  VectorField final_u;
  bool aborted = false;
  std::string abort_reason;
  std::size_t steps = 0;
  double initial_l2 = 0.0;
  double max_rel_drift = 0.0;
  double max_div = 0.0;

  void write_csv(const std::string& path, const std::vector<std::pair<std::string, double>>& final_fields = {}) const;
};

// dt * kmax * sup|u| <= 0.5
bool cfl_ok(const Grid& g, double dt, double sup_u);

// Velocity form right side: -P_L div(u (x) u) - P_L(e3 x u).
VectorField velocity_rhs(const VectorField& u, bool linear = false);

// One step from (u, t). Profile form advances f and maps back to u.
VectorField step(const VectorField& u, double t, const SolverConfig& cfg, double* dtf_norm = nullptr);
VectorProfile step_profile(const VectorProfile& p, double dt, bool linear = false, double* dtf_norm = nullptr);

using RowCallback = std::function<void(const TrajectoryRow&, const VectorField&)>;
TrajectoryRecord run(const SolverConfig& cfg, const VectorField& u0, const RowCallback& on_row = {});

double helicity(const VectorField& u);

std::string to_string(Formulation f);
std::string to_string(Integrator i);
std::string to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& s);

}  // namespace ec
