// Dispersive profiles, the scalar gauge R_+-, and the profile nonlinearity.
#pragma once

#include <utility>

#include "ec/spectral.hpp"

namespace ec {

struct SignTriple {
  int mu = 1;
  int mu1 = 1;
  int mu2 = 1;
};

// All eight sign triples in a fixed order.
std::array<SignTriple, 8> all_sign_triples();

struct VectorProfile {
  VectorField plus;
  VectorField minus;
  double time = 0.0;
};

struct ScalarProfile {
  SpectralField plus;
  SpectralField minus;
  double time = 0.0;
};

struct GaugeFrame {
  Vec3 g1;
  Vec3 g2;
};

GaugeFrame gauge_frame(const Vec3& xi);

// Symbol of R_s acting on a Fourier vector v at xi (xi_h != 0).
cplx r_symbol(const Vec3& xi, const std::array<cplx, 3>& v, int sign);
// Symbol of R_s^{-1}: the vector -i Gamma1 + s Gamma2.
std::array<cplx, 3> r_inverse_symbol(const Vec3& xi, int sign);

SpectralField r_pm(const VectorField& u, int sign);
VectorField r_pm_inverse(const SpectralField& G, int sign);
bool axis_clear(const SpectralField& G);
void clear_axis(SpectralField& G);

VectorProfile profiles_from_velocity(const VectorField& u, double t);
VectorField velocity_from_profiles(const VectorProfile& p);

// -e^{-mu it Lambda} P_mu P_L div(e^{mu1 it Lambda} f1 (x) e^{mu2 it Lambda} f2).
VectorField nonlinearity(const VectorField& f1, const VectorField& f2, SignTriple s, double t);
// Same term through e^{-mu it Lambda} P_mu P_L (a x mu2 |grad| b).
VectorField nonlinearity_curl_form(const VectorField& f1, const VectorField& f2, SignTriple s, double t);

// -P_L div(u (x) u) with dealiased pseudo-spectral products.
VectorField euler_nonlinearity(const VectorField& u);

std::pair<VectorField, VectorField> rhs_profile(const VectorProfile& p);

}  // namespace ec
