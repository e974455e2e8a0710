#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ec/multipliers.hpp"
#include "ec/oracle.hpp"

using namespace ec;

namespace {

MultiplierSample at(Vec3 xi, Vec3 eta, SignTriple s = {1, 1, 1}) { return {xi, eta, s}; }

SpectralField random_axis_free(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SpectralField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = g.lattice(i);
    if ((k[0] == 0 && k[1] == 0) || std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]) > 3) continue;
    f[i] = {nd(rng), nd(rng)};
  }
  return f;
}

}  // namespace

TEST(Phase, Values) {
  EXPECT_EQ(phase(at({1, 2, 0}, {-1, 0.5, 0})), 0.0);
  EXPECT_NEAR(phase(at({0.3, 0, 2}, {0.3, 0, 1})), -dispersion({0.3, 0, 2}) + 1.0 + dispersion({0.3, 0, 1}), 1e-15);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    MultiplierSample s = random_sample(rng, {1, 1, 1});
    const double p = phase(s);
    s.signs = {-1, -1, -1};
    EXPECT_NEAR(phase(s), -p, 1e-15);
  }
}

TEST(Phase, VerticalHandValue) {
  // Lambda = 1 on every vertical frequency: -1 + 1 + 1.
  const MultiplierSample s = at({0, 0, 2}, {0, 0, 1});
  EXPECT_NEAR(phase(s), 1.0, 1e-15);
}

TEST(SigmaBar, Values) {
  const auto a = sigma_bar({1, 0, 1}, {0, 1, 0});
  EXPECT_NEAR(a[0], 0.0, 1e-15);
  EXPECT_NEAR(a[1], 1.0, 1e-15);
  const auto b = sigma_bar({1, 2, 3}, {2, 4, 6});
  EXPECT_NEAR(std::hypot(b[0], b[1]), 0.0, 1e-15);
  const auto c = sigma_bar({1, 2, 3}, {1, 2, 3});
  EXPECT_NEAR(std::hypot(c[0], c[1]), 0.0, 1e-15);
}

TEST(Multipliers, HandValues) {
  const MultiplierSample s = at({1, 0, 0}, {0, 1, 0});
  EXPECT_NEAR(std::abs(m1(s)), 0.0, 1e-15);
  const cplx v = m2(s);
  EXPECT_NEAR(v.real(), -1.0 / (2.0 * std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(Multipliers, RejectsAxisFrequencies) {
  EXPECT_THROW(check_sample(at({0, 0, 1}, {1, 0, 0})), std::domain_error);
  EXPECT_THROW(check_sample(at({1, 0, 1}, {1, 0, 0})), std::domain_error);
}

TEST(Multipliers, EnergyStructure) {
  std::mt19937_64 rng(2);
  for (const auto& sg : all_sign_triples())
    for (int i = 0; i < 200; ++i) {
      const MultiplierSample s = random_sample(rng, sg);
      const MultiplierSample r{s.eta, s.xi, {sg.mu2, sg.mu1, sg.mu}};
      for (int j = 1; j <= 3; ++j) {
        const cplx a = m_component(s, j), b = m_component(r, j);
        EXPECT_LT(std::abs(a + std::conj(b)), 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
}

TEST(Multipliers, NullFormOnEqualModuli) {
  for (int mu : {1, -1})
    for (int mu1 : {1, -1}) {
      const MultiplierSample s = at({2, 0, 0}, {1, 1, 0}, {mu, mu1, mu1});
      for (int j = 1; j <= 2; ++j) {
        EXPECT_LT(std::abs(m_sym(s, j)), 1e-12);
        EXPECT_LT(std::abs(m_sym_factored(s, j)), 1e-12);
      }
    }
}

TEST(Multipliers, VectorFieldIdentityAtHandPoint) {
  const auto rows = vf_identity_residuals(at({1, 0, 1}, {0, 1, 0}), 1e-4);
  bool found = false;
  for (const auto& r : rows) {
    if (r.exact) EXPECT_LT(r.residual[0], 1e-9) << r.name;
    if (r.name.find("Lambda(xi-eta)") != std::string::npos && r.name.find("S_eta") == 0) {
      found = true;
      EXPECT_LT(r.residual[0], 1e-8) << r.name;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Multipliers, AuditIsDeterministic) {
  const MultiplierAudit a = multiplier_audit(2000, 200, 7), b = multiplier_audit(2000, 200, 7);
  EXPECT_EQ(a.energy_residual, b.energy_residual);
  EXPECT_EQ(a.sym_factored_gap, b.sym_factored_gap);
  for (double v : a.energy_residual) EXPECT_LT(v, 1e-12);
  EXPECT_LT(a.w_symmetry, 1e-12);
  EXPECT_LT(a.sym_on_equal_moduli, 1e-12);
  EXPECT_LT(a.sym_on_resonant_set, 1e-12);
  EXPECT_LT(a.sym_factored_gap, 1e-12);
}

TEST(Bilinear, FactoredMatchesDirect) {
  const Grid g(8, 1.0);
  std::mt19937_64 rng(3);
  const SpectralField a = random_axis_free(g, rng), b = random_axis_free(g, rng);
  for (const auto& s : all_sign_triples()) {
    const SymbolPlan plan = symbol_plan(0, s);
    const SpectralField fast = bilinear_factored(a, b, s, 0.6, plan);
    const oracle::PairSymbol m = [&](const Vec3& xi, const Vec3& eta) {
      const Vec3 d{xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
      if (std::hypot(xi[0], xi[1]) == 0 || std::hypot(eta[0], eta[1]) == 0 || std::hypot(d[0], d[1]) == 0)
        return cplx(0.0);
      return m_total({xi, eta, s});
    };
    SpectralField direct = oracle::bilinear_direct(a, b, m, s.mu, s.mu1, s.mu2, 0.6);
    // The factored path uses periodic products; compare on modes the direct sum sees without wrap.
    SpectralField mask(g);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      const auto k = g.lattice(i);
      if (std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]) <= 1 && !(k[0] == 0 && k[1] == 0)) mask[i] = 1.0;
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] != cplx(0.0)) {
        num += std::norm(fast[i] - direct[i]);
        den += std::norm(direct[i]);
      }
    EXPECT_LT(std::sqrt(num / den), 1e-10);
  }
}

TEST(Bilinear, IdentityPlanIsModulusOfProduct) {
  const Grid g(8, 1.0);
  std::mt19937_64 rng(4);
  const SpectralField a = random_axis_free(g, rng), b = random_axis_free(g, rng);
  const SpectralField q = bilinear_factored(a, b, {1, 1, 1}, 0.0, identity_plan());
  const CArray x = inverse_transform(a), y = inverse_transform(b);
  CArray z(x.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
  const SpectralField ref = differential(dealias(transform(g, z)), DiffKind::modulus);
  EXPECT_LT(l2_norm(dealias(q) - ref), 1e-12 * l2_norm(ref));
}

TEST(Consistency, ZeroAndRandom) {
  const Grid g(12, 1.1);
  std::mt19937_64 rng(5);
  const SpectralField a = random_axis_free(g, rng), b = random_axis_free(g, rng);
  for (const auto& s : all_sign_triples()) {
    EXPECT_EQ(nonlinearity_consistency(a, SpectralField(g), s, 0.3).lhs_norm, 0.0);
    const auto r = nonlinearity_consistency(a, b, s, 0.3);
    EXPECT_LT(r.residual, 1e-9);
  }
}
