// Bilinear phase, explicit multipliers m1..m3, symmetrized null forms and the
// factored (product-based) evaluation of Q[m].
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ec/profiles.hpp"
#include "ec/spectral.hpp"

namespace ec {

struct MultiplierSample {
  Vec3 xi{};
  Vec3 eta{};
  SignTriple signs{};
};

// Throws std::domain_error if xi, eta or xi - eta has a vanishing horizontal part.
void check_sample(const MultiplierSample& s);

double phase(const MultiplierSample& s);
std::array<double, 2> sigma_bar(const Vec3& xi, const Vec3& eta);
double w_symbol(const Vec3& xi, const Vec3& eta);

cplx m1(const MultiplierSample& s);
cplx m2(const MultiplierSample& s);
cplx m3(const MultiplierSample& s);
cplx m_total(const MultiplierSample& s);
cplx m_component(const MultiplierSample& s, int which);  // which in {1, 2, 3}

// m^(j)(xi, eta) + m^(j)(xi, xi - eta), j in {1, 2}; needs mu1 == mu2.
cplx m_sym(const MultiplierSample& s, int which);
cplx m_sym_factored(const MultiplierSample& s, int which);

struct IdentityResidual {
  std::string name;
  std::array<double, 3> residual{};  // |closed - finite difference| at h, h/2, h/4
  double richardson = 0.0;           // residual of the extrapolated difference
  bool exact = false;                // finite difference is exact for this identity
};

std::vector<IdentityResidual> vf_identity_residuals(const MultiplierSample& s, double h = 1e-3);

// Zeroth-order factor Lambda^a (1 - Lambda^2)^{b/2} (xi_1/|xi_h|)^c (xi_2/|xi_h|)^d.
struct Monomial {
  int lam = 0, sq = 0, a1 = 0, a2 = 0;
  double eval(const Vec3& z) const;
  bool operator<(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;
};

// m(xi, eta) = |xi| sum_terms c D0(xi) D1(xi - eta) D2(eta).
struct SymbolTerm {
  cplx c;
  Monomial d0, d1, d2;
};
using SymbolPlan = std::vector<SymbolTerm>;

// which: 1, 2, 3 or 0 for the total.
SymbolPlan symbol_plan(int which, SignTriple s);
SymbolPlan identity_plan();  // m = |xi|
cplx eval_plan(const SymbolPlan& plan, const Vec3& xi, const Vec3& eta);

SpectralField bilinear_factored(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t,
                                const SymbolPlan& plan);

struct ConsistencyResult {
  double residual = 0.0;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
};

// R_mu N(R^{-1}_{mu1} G1, R^{-1}_{mu2} G2) against the factored Q[m_total].
ConsistencyResult nonlinearity_consistency(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t);
SpectralField nonlinearity_scalar(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t);

struct MultiplierAudit {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t resonant_samples = 0;
  std::array<double, 3> energy_residual{};  // per j, max over samples and sign triples
  double w_symmetry = 0.0;
  double sym_factored_gap = 0.0;  // |m_sym - factored|
  double sym_on_equal_moduli = 0.0;
  double sym_on_resonant_set = 0.0;
  double homogeneity = 0.0;        // |m(2xi, 2eta) - 2 m(xi, eta)| / |m|
  double plan_gap = 0.0;           // |eval_plan - closed form|
};

MultiplierSample random_sample(std::mt19937_64& rng, SignTriple s);
MultiplierAudit multiplier_audit(std::size_t samples, std::size_t resonant_samples, std::uint64_t seed);

}  // namespace ec
