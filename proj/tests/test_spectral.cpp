#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ec/oracle.hpp"
#include "ec/solver.hpp"
#include "ec/spectral.hpp"

using namespace ec;

namespace {

constexpr double kPi = std::numbers::pi;

RArray physical(const Grid& g, double (*f)(const Vec3&)) {
  RArray a(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f(g.position(i));
  return a;
}

VectorField beltrami(const Grid& g) {
  VectorField u(g, true);
  u[0] = transform(g, physical(g, [](const Vec3& x) { return std::sin(x[2]); }));
  u[1] = transform(g, physical(g, [](const Vec3& x) { return std::cos(x[2]); }));
  return u;
}

VectorField random_divfree(const Grid& g, std::uint64_t seed) {
  InitialData d;
  d.kind = InitialKind::random_bandlimited;
  d.amplitude = 1.0;
  d.band = 0.5 * g.kmax();
  d.seed = seed;
  return make_initial(g, d);
}

double rel(const VectorField& a, const VectorField& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST(Grid, CubicAccessors) {
  const Grid g(16, 2.0);
  EXPECT_TRUE(g.cubic());
  EXPECT_EQ(g.n(), 16);
  EXPECT_DOUBLE_EQ(g.dx(), 2 * kPi * 2.0 / 16);
  EXPECT_DOUBLE_EQ(g.x(0), -kPi * 2.0);
  EXPECT_EQ(g.freq(9), -7);
  EXPECT_EQ(g.slot(-1), 15);
}

TEST(Grid, AnisotropicRejectsCubicAccessors) {
  const Grid g({16, 8, 32}, {1.0, 2.0, 3.0});
  EXPECT_FALSE(g.cubic());
  EXPECT_THROW(g.n(), std::logic_error);
  EXPECT_THROW(g.L(), std::logic_error);
  EXPECT_THROW(g.dx(), std::logic_error);
  EXPECT_EQ(g.n(2), 32);
  EXPECT_DOUBLE_EQ(g.box_volume(), 8 * kPi * kPi * kPi * 6.0);
  EXPECT_DOUBLE_EQ(g.kmax(), 2.0);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(7, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid(4, 1.0), std::invalid_argument);
  EXPECT_THROW(Grid(8, 0.0), std::invalid_argument);
}

TEST(Transform, AnisotropicParseval) {
  const Grid g({16, 8, 24}, {1.0, 0.5, 2.0});
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  RArray a(g.size());
  double sum = 0.0;
  for (auto& v : a) {
    v = nd(rng);
    sum += v * v;
  }
  const SpectralField f = transform(g, a);
  EXPECT_NEAR(l2_norm(f), std::sqrt(sum * g.cell_volume()), 1e-12 * std::sqrt(sum * g.cell_volume()));
  const RArray back = inverse_transform_real(f);
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::fabs(back[i] - a[i]));
  EXPECT_LT(err, 1e-12);
}

TEST(Transform, DeltaIsConstant) {
  const Grid g(8, 1.0);
  RArray a(g.size(), 0.0);
  a[g.index(4, 4, 4)] = 1.0;  // x = 0
  const SpectralField f = transform(g, a);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(std::abs(f[i] - f[0]), 0.0, 1e-15);
  EXPECT_NEAR(f[0].real(), g.cell_volume(), 1e-14);
}

TEST(Transform, RoundTripRandom) {
  const Grid g(16, 1.3);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(-1, 1);
  RArray a(g.size());
  for (auto& v : a) v = ud(rng);
  const RArray b = inverse_transform_real(transform(g, a));
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  EXPECT_LT(std::sqrt(num / den), 1e-12);
}

TEST(Transform, SingleModeMatchesDirectSum) {
  const Grid g(8, 1.5);
  CArray a(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::polar(1.0, g.position(i)[2] / g.L());
  const SpectralField fast = transform(g, a);
  const SpectralField direct = oracle::dft_direct(g, a);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    const auto k = g.lattice(i);
    const double expect = (k == std::array<int, 3>{0, 0, 1}) ? g.box_volume() : 0.0;
    EXPECT_NEAR(std::abs(fast[i] - expect), 0.0, 1e-11 * g.box_volume());
    EXPECT_NEAR(std::abs(direct[i] - fast[i]), 0.0, 1e-11 * g.box_volume());
  }
}

TEST(Differential, BeltramiIsCurlEigenfield) {
  const Grid g(16, 1.0);
  const VectorField u = beltrami(g);
  EXPECT_LT(rel(curl(u), u), 1e-13);
}

TEST(Differential, DivergenceOfCurlVanishes) {
  const Grid g(16, 1.0);
  const VectorField u = random_divfree(g, 4);
  EXPECT_LT(l2_norm(divergence(curl(u))), 1e-12 * l2_norm(curl(u)));
}

TEST(Differential, InverseModulusSingleMode) {
  const Grid g(16, 1.0);
  SpectralField f(g);
  f.at(0, 3, 4) = cplx(2.0, -1.0);
  const SpectralField h = differential(f, DiffKind::inv_modulus);
  EXPECT_NEAR(std::abs(h.at(0, 3, 4) - cplx(0.4, -0.2)), 0.0, 1e-15);
}

TEST(Leray, GradientAnnihilatedAndDivFreeKept) {
  const Grid g(16, 1.0);
  const VectorField u = random_divfree(g, 5);
  EXPECT_LT(rel(leray_project(u), u), 1e-13);
  const VectorField gp = gradient(u[0]);
  EXPECT_LT(l2_norm(leray_project(gp)), 1e-13 * l2_norm(gp));
}

TEST(Leray, CoriolisIdentityOnBeltrami) {
  const Grid g(16, 1.0);
  const VectorField u = beltrami(g);
  VectorField expect(g);
  expect[0] = -1.0 * u[1];  // (-cos x3, sin x3, 0)
  expect[1] = u[0];
  EXPECT_LT(rel(leray_project(cross_e3(u)), expect), 1e-13);
  EXPECT_LT(rel(differential(curl(u), DiffKind::d3_inv_laplacian), expect), 1e-13);
}

TEST(Helical, BeltramiIsPositive) {
  const Grid g(16, 1.0);
  const VectorField u = beltrami(g);
  const auto [p, m] = helical_split(u);
  EXPECT_LT(rel(p, u), 1e-13);
  EXPECT_LT(l2_norm(m), 1e-13 * l2_norm(u));
}

TEST(Helical, SingleModeSplit) {
  const Grid g(8, 1.0);
  VectorField u(g);
  u[0].at(0, 0, 1) = 1.0;
  const auto [p, m] = helical_split(u);
  EXPECT_NEAR(std::abs(p[0].at(0, 0, 1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p[1].at(0, 0, 1) - cplx(0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[1].at(0, 0, 1) - cplx(0, -0.5)), 0.0, 1e-15);
}

TEST(Helical, Orthogonality) {
  const Grid g(16, 1.0);
  const VectorField u = random_divfree(g, 6);
  const auto [p, m] = helical_split(u);
  const double a = l2_norm(u), b = l2_norm(p), c = l2_norm(m);
  EXPECT_NEAR(a * a, b * b + c * c, 1e-12 * a * a);
}

TEST(Dispersion, Values) {
  EXPECT_DOUBLE_EQ(dispersion({0, 0, 5}), 1.0);
  EXPECT_DOUBLE_EQ(dispersion({3, 4, 0}), 0.0);
  EXPECT_NEAR(dispersion({0, 3, 4}), 0.8, 1e-15);
}

TEST(Semigroup, Phases) {
  const Grid g(16, 1.0);
  SpectralField f(g);
  f.at(0, 0, 1) = 1.0;
  f.at(0, 3, 4) = 1.0;
  f.at(2, 1, 0) = 1.0;
  const SpectralField a = semigroup(f, kPi, +1);
  EXPECT_NEAR(std::abs(a.at(0, 0, 1) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a.at(2, 1, 0) - 1.0), 0.0, 1e-15);
  const SpectralField b = semigroup(f, 2.0, +1);
  EXPECT_NEAR(std::abs(b.at(0, 3, 4) - std::polar(1.0, 1.6)), 0.0, 1e-14);
}

TEST(Dealias, MaskAndIdempotence) {
  const Grid g(16, 1.0);
  SpectralField f(g);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {nd(rng), nd(rng)};
  const SpectralField d = dealias(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = g.lattice(i);
    EXPECT_EQ(d[i], retained(g, k[0], k[1], k[2]) ? f[i] : cplx(0.0));
  }
  EXPECT_EQ(l2_norm(dealias(d) - d), 0.0);
  SpectralField low(g);
  low.at(1, -2, 3) = 1.0;
  EXPECT_EQ(l2_norm(dealias(low) - low), 0.0);
}
