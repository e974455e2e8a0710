#include <cmath>

#include <gtest/gtest.h>

#include "ec/profiles.hpp"
#include "ec/solver.hpp"

using namespace ec;

namespace {

VectorField random_divfree(const Grid& g, std::uint64_t seed) {
  InitialData d;
  d.kind = InitialKind::random_bandlimited;
  d.amplitude = 1.0;
  d.band = 0.5 * g.kmax();
  d.seed = seed;
  return make_initial(g, d);
}

void expect_vec(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

}  // namespace

TEST(Gauge, HandValues) {
  const GaugeFrame a = gauge_frame({1, 0, 0});
  expect_vec(a.g1, {0, 1, 0});
  expect_vec(a.g2, {0, 0, 1});
  const GaugeFrame b = gauge_frame({0, 1, 0});
  expect_vec(b.g1, {-1, 0, 0});
  expect_vec(b.g2, {0, 0, 1});
}

TEST(Gauge, ScaleInvariant) {
  const Vec3 xi{0.3, -1.2, 0.7};
  const GaugeFrame a = gauge_frame(xi), b = gauge_frame({0.6, -2.4, 1.4});
  expect_vec(a.g1, b.g1);
  expect_vec(a.g2, b.g2);
}

TEST(Gauge, RSymbolAtE1) {
  // u^_s = -i G (Gamma1 + s i Gamma2).
  const Vec3 xi{1, 0, 0};
  for (int s : {+1, -1}) {
    const auto w = r_inverse_symbol(xi, s);
    const GaugeFrame fr = gauge_frame(xi);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(w[i] - (cplx(0, -1) * fr.g1[i] + double(s) * fr.g2[i])), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r_symbol(xi, w, s) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r_symbol(xi, w, -s)), 0.0, 1e-15);
  }
}

TEST(Gauge, AnnihilatesOppositeHelicityAndInverts) {
  const Grid g(16, 1.0);
  const auto [up, um] = helical_split(random_divfree(g, 7));
  EXPECT_LT(max_abs(r_pm(um, +1)), 1e-12 * max_abs(r_pm(up, +1)));
  SpectralField G = r_pm(up, +1);
  clear_axis(G);
  const VectorField back = r_pm_inverse(G, +1);
  // Compare away from the x3 axis, where the gauge is undefined.
  VectorField ref = up;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < ref[c].size(); ++i) {
      const auto k = g.lattice(i);
      if (k[0] == 0 && k[1] == 0) ref[c][i] = 0.0;
    }
  EXPECT_LT(l2_norm(back - ref), 1e-12 * l2_norm(ref));
}

TEST(Gauge, InverseOfZero) {
  const Grid g(8, 1.0);
  EXPECT_EQ(l2_norm(r_pm_inverse(SpectralField(g), -1)), 0.0);
}

TEST(Nonlinearity, ZeroSecondArgument) {
  const Grid g(16, 1.0);
  const VectorField f = random_divfree(g, 8);
  EXPECT_EQ(l2_norm(nonlinearity(f, VectorField(g, true), {1, 1, 1}, 0.3)), 0.0);
}

TEST(Nonlinearity, CurlFormAgrees) {
  const Grid g(16, 1.0);
  const auto [a, am] = helical_split(random_divfree(g, 9));
  const auto [bp, b] = helical_split(random_divfree(g, 10));
  for (const auto& s : all_sign_triples()) {
    const VectorField f1 = s.mu1 > 0 ? a : am;
    const VectorField f2 = s.mu2 > 0 ? bp : b;
    // The forms differ by a gradient unless the pair is symmetrized.
    const SignTriple r{s.mu, s.mu2, s.mu1};
    const VectorField x = nonlinearity(f1, f2, s, 0.4) + nonlinearity(f2, f1, r, 0.4);
    const VectorField y = nonlinearity_curl_form(f1, f2, s, 0.4) + nonlinearity_curl_form(f2, f1, r, 0.4);
    EXPECT_LT(l2_norm(x - y), 1e-10 * std::max(l2_norm(x), 1e-300));
  }
}

TEST(Nonlinearity, BeltramiAtTimeZero) {
  const Grid g(16, 1.0);
  InitialData d;
  d.kind = InitialKind::beltrami;
  d.amplitude = 1.0;
  d.band = 3.0;
  const VectorField u = make_initial(g, d);
  const auto [up, um] = helical_split(u);
  const VectorField n = nonlinearity(up, up, {1, 1, 1}, 0.0);
  const VectorField direct = helical_project(euler_nonlinearity(up), +1);
  EXPECT_LT(l2_norm(n - direct), 1e-12 * std::max(l2_norm(direct), 1e-12));
}

TEST(Profile, ZeroIsFixed) {
  const Grid g(16, 1.0);
  VectorProfile p{VectorField(g, true), VectorField(g, true), 0.5};
  const auto [dp, dm] = rhs_profile(p);
  EXPECT_EQ(l2_norm(dp) + l2_norm(dm), 0.0);
}

TEST(Profile, MatchesVelocityForm) {
  const Grid g(16, 1.0);
  const VectorField u = random_divfree(g, 11);
  const double t = 0.8;
  const VectorProfile p = profiles_from_velocity(u, t);
  EXPECT_LT(l2_norm(velocity_from_profiles(p) - u), 1e-13 * l2_norm(u));
  const auto [dp, dm] = rhs_profile(p);
  // d/dt f_s = e^{-s it Lambda} P_s (-P_L div(u (x) u)).
  const VectorField nl = euler_nonlinearity(u);
  const VectorField ep = semigroup(helical_project(nl, +1), t, -1);
  const VectorField em = semigroup(helical_project(nl, -1), t, +1);
  EXPECT_LT(l2_norm(dp - ep), 1e-10 * l2_norm(ep));
  EXPECT_LT(l2_norm(dm - em), 1e-10 * l2_norm(em));
}
