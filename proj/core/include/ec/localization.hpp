// Cutoffs, frequency projections, physical localizers, ring operators Q^J_j,
// wave-packet sets and the telescoping bilinear decomposition.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ec/spectral.hpp"

namespace ec {

namespace cutoff {
// Smooth step: 0 for s <= 0, 1 for s >= 1, S(s) + S(1 - s) = 1.
double step(double s);
// Even bump, 1 on [-1.8, 1.8], supported in [-2, 2].
double psi(double x);
// Dyadic ring psi(x) - psi(2x), supported in 0.9 <= |x| <= 2.
double phi(double x);
// Ring partition for Q^J_j: supported in (-0.6, 0.6), sum_j phiQ(x - j) = 1.
double phi_q(double x);

double chi_h(double lam);
double chi_v(double lam);
double chi_h_tilde(double lam);
double chi_v_tilde(double lam);
// chi^{h,<=-1} and chi^{v,<=-1}.
double chi_h_le_m1(double lam);
double chi_v_le_m1(double lam);
}  // namespace cutoff

enum class Family { all, h, v };

// A Fourier projection. Unset optionals mean "not localized in that variable".
struct Selector {
  Family family = Family::all;
  std::optional<int> k;  // dyadic |xi_h| (h), |xi_3| (v) or both (all)
  std::optional<int> q;  // Lambda level (h family)
  std::optional<int> p;  // sqrt(1 - Lambda^2) level (v family)
  bool le = false;       // q/p mean "<= q" / "<= p"
  bool tilde = false;

  double symbol(const Vec3& xi) const;
  std::string describe() const;
};

struct ProjectResult {
  SpectralField field;
  bool unresolved = false;
};

ProjectResult project(const SpectralField& f, const Selector& sel);
VectorField project(const VectorField& u, const Selector& sel, bool* unresolved = nullptr);
// True if the dyadic ring 0.9*2^k <= r <= 2^{k+1} is representable on the grid,
// r being |xi_h| (h), |xi_3| (v) or checked along every axis (all).
bool ring_resolvable(const Grid& g, int k, Family family = Family::all);

enum class SpatialKind { Z, H, Z_mod, H_mod, Z_plus, Z_minus, Z_le, H_le };

struct SpatialSelector {
  SpatialKind kind = SpatialKind::Z;
  int l = 0;
  int k = 0;  // only for the modified kinds
  double weight(const Vec3& x) const;
};

SpectralField spatial_localize(const SpectralField& f, const SpatialSelector& sel);
VectorField spatial_localize(const VectorField& u, const SpatialSelector& sel);
// Pointwise multiplication by an arbitrary weight w(x).
SpectralField multiply_physical(const SpectralField& f, const std::function<double(const Vec3&)>& w);

struct RingResult {
  SpectralField field;
  bool unresolved = false;
};

double ring_symbol(const Vec3& xi, int J, long j);
RingResult ring_localize(const SpectralField& f, int J, long j);
// Range of ring indices j that meet the lattice (axis excluded).
std::pair<long, long> ring_index_range(const Grid& g, int J);

// Parsed CLI selector, e.g. "Pk:h:q=-3:k=0", "Z:l=4", "Q:J=5:j=12".
struct ParsedSelector {
  enum class Kind { fourier, spatial, ring } kind = Kind::fourier;
  Selector fourier;
  SpatialSelector spatial;
  int J = 0;
  long j = 0;
};
ParsedSelector parse_selector(const std::string& text);
SpectralField apply_selector(const SpectralField& f, const ParsedSelector& s, bool* unresolved = nullptr);

struct WavePacketGeometry {
  int m = 1;
  int J = 5;
  long j = 0;
  double C1 = 20.0;
  double C2 = 16.0;
  double alpha = 0.35;
  double gamma = 0.6;

  // Checks J in [5, floor(m gamma / 2)] and |j| <= 10 * 4^J.
  bool admissible() const;
  double rho1() const;
  double rho2() const;
};

struct Membership {
  bool in_cylinder = false;
  int level = -1;  // l of B^J_j(l); -1 outside the cylinder
  double distance = 0.0;
};

Membership wavepacket_sets(const WavePacketGeometry& geo, const Vec3& x, double t);

using Bilinear = std::function<SpectralField(const SpectralField&, const SpectralField&)>;

struct TelescopePiece {
  int group = 0;  // 1: non-adjacent at J0, 2: level J, 3: adjacent at Jmax
  int J = 0;
  long j1 = 0, j2 = 0;
  long j1p = 0, j2p = 0;  // parent indices at level J - 1 (group 2 only)
  SpectralField value;
};

// Exact decomposition of bilinear(g1, g2). Pieces whose inputs vanish are
// skipped; the retained list still sums to the full form.
std::vector<TelescopePiece> telescope(const Bilinear& bilinear, const SpectralField& g1, const SpectralField& g2,
                                      int J0, int Jmax);

}  // namespace ec
