// Energy and vector-field norms, the X/Y bootstrap norms, decay fits and
// trajectory monitors.
#pragma once

#include <string>
#include <vector>

#include "ec/profiles.hpp"
#include "ec/spectral.hpp"

namespace ec {

enum class NormKind { Hn, S_Omega_energy, X, Y, weighted, sup };

struct NormSpec {
  NormKind kind = NormKind::Hn;
  int n = 0;          // Sobolev index (Hn, S_Omega_energy)
  int n1 = 0, n2 = 0;  // X/Y parameters; n2 also bounds a + b for S_Omega_energy
  double beta = 0.0;
};

struct NormValue {
  double value = 0.0;
  bool reliable = true;  // false if too much mass sits near the box boundary
  int k = 0, l = 0;      // maximizing (k, l) for X/Y
  int a = 0, b = 0;
};

NormValue norm(const SpectralField& f, const NormSpec& spec);
// Components are combined by sum (X, Y, S_Omega_energy) or in l2 (Hn, weighted).
NormValue norm(const VectorField& u, const NormSpec& spec);

// S = x . grad and Omega = x_h^perp . grad_h with centered coordinates.
SpectralField apply_S(const SpectralField& f);
SpectralField apply_Omega(const SpectralField& f);
VectorField apply_S(const VectorField& u);
// Omega-bar u = Omega u - u_h^perp.
VectorField apply_Omega_bar(const VectorField& u);

// Fraction of L2 mass inside the centered box of relative size `inner`.
double interior_mass_fraction(const SpectralField& f, double inner = 0.9);
double interior_mass_fraction(const VectorField& u, double inner = 0.9);

// Dyadic k for which the h (or v) ring holds at least `min_modes` lattice modes.
std::vector<int> admissible_k(const Grid& g, bool horizontal, int min_modes = 8);

struct LinfControl {
  std::vector<int> k;
  std::vector<double> ratio;  // 2^{3k/2} |chi^h_k f^|_inf / X^{0,2}_0
  double max_ratio = 0.0;
};
LinfControl linf_control_check(const SpectralField& f, const std::vector<int>& ks = {});

struct DecayFit {
  double t0 = 0.0, t1 = 0.0;
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // rms of log-log residuals
  double recurrence_time = 0.0;
  std::size_t samples = 0;
};

// Least squares of log v against log t on [t0, t1]. Throws if fewer than
// 8 samples fall in the window or t1 > recurrence / 2.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1,
                   double recurrence_time);

struct EnergyMonitor {
  double c_hn = 0.0;        // smallest C with dE/dt <= C |grad u|_inf E
  double c_s_omega = 0.0;
  double c_weighted = 0.0;
  double max_rate = 0.0;    // max |dE_n/dt| / E_n
  bool finite = true;
};

struct Snapshot {
  double t = 0.0;
  VectorField u;
};

EnergyMonitor energy_inequality_monitor(const std::vector<Snapshot>& traj, int n = 2, double beta = 0.1);

double grad_sup(const VectorField& u);
double sup_norm(const VectorField& u);
double sup_norm(const SpectralField& f);
double profile_distance(const VectorProfile& a, const VectorProfile& b);

std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

}  // namespace ec
