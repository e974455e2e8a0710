#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ec/norms.hpp"
#include "ec/oracle.hpp"
#include "ec/solver.hpp"

using namespace ec;

namespace {

SpectralField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {nd(rng), nd(rng)};
  return dealias(f);
}

}  // namespace

TEST(DecayFit, PowerLawAndConstant) {
  std::vector<double> t, v, c;
  for (int i = 0; i < 20; ++i) {
    t.push_back(std::pow(2.0, 1 + 0.3 * i));
    v.push_back(3.5 / t.back());
    c.push_back(2.0);
  }
  const DecayFit a = decay_fit(t, v, 2.0, 100.0, 1e4);
  EXPECT_NEAR(a.exponent, -1.0, 1e-10);
  EXPECT_NEAR(a.constant, 3.5, 1e-9);
  EXPECT_NEAR(decay_fit(t, c, 2.0, 100.0, 1e4).exponent, 0.0, 1e-10);
  EXPECT_THROW(decay_fit(t, v, 2.0, 100.0, 150.0), std::invalid_argument);
  EXPECT_THROW(decay_fit(t, v, 2.0, 5.0, 1e4), std::invalid_argument);
}

TEST(Norms, ZeroAndHomogeneous) {
  const Grid g(16, 1.0);
  const SpectralField f = random_field(g, 1);
  for (NormKind k : {NormKind::Hn, NormKind::X, NormKind::Y, NormKind::sup}) {
    NormSpec s;
    s.kind = k;
    s.n = 1;
    EXPECT_EQ(norm(SpectralField(g), s).value, 0.0) << to_string(k);
    EXPECT_NEAR(norm(2.0 * f, s).value, 2.0 * norm(f, s).value, 1e-12 * norm(f, s).value) << to_string(k);
  }
  EXPECT_EQ(norm_kind_from_string(to_string(NormKind::Y)), NormKind::Y);
}

TEST(Norms, LinfControlScaleInvariant) {
  const Grid g(32, 2.0);
  const SpectralField f = random_field(g, 2);
  const LinfControl a = linf_control_check(f), b = linf_control_check(3.0 * f);
  EXPECT_TRUE(std::isfinite(a.max_ratio));
  EXPECT_NEAR(a.max_ratio, b.max_ratio, 1e-12 * a.max_ratio);
  EXPECT_EQ(linf_control_check(SpectralField(g)).max_ratio, 0.0);
}

TEST(Oracle, DirectDftMatchesFft) {
  const Grid g(8, 0.7);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  CArray a(g.size()), b(g.size());
  for (auto& v : a) v = {nd(rng), nd(rng)};
  for (auto& v : b) v = {nd(rng), nd(rng)};
  const SpectralField fa = transform(g, a), da = oracle::dft_direct(g, a);
  EXPECT_LT(l2_norm(fa - da), 1e-11 * l2_norm(fa));
  CArray s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 2.0 * a[i] - b[i];
  const SpectralField lin = oracle::dft_direct(g, s);
  const SpectralField ref = 2.0 * da - oracle::dft_direct(g, b);
  EXPECT_LT(l2_norm(lin - ref), 1e-12 * l2_norm(ref));
  oracle::Budget tight;
  tight.max_dft_n = 4;
  EXPECT_THROW(oracle::dft_direct(g, a, tight), std::invalid_argument);
}

TEST(Oracle, PointwiseSemigroup) {
  const Grid g(8, 1.0);
  const SpectralField f = random_field(g, 4);
  const CArray phys0 = inverse_transform(f);
  const CArray phys = inverse_transform(semigroup(f, 1.3, -1));
  for (std::size_t idx : {0ul, 77ul, 300ul, 511ul}) {
    EXPECT_NEAR(std::abs(oracle::semigroup_pointwise(f, 0.0, 1, g.position(idx)) - phys0[idx]), 0.0, 1e-11);
    EXPECT_NEAR(std::abs(oracle::semigroup_pointwise(f, 1.3, -1, g.position(idx)) - phys[idx]), 0.0, 1e-11);
  }
  SpectralField v(g);
  v.at(0, 0, 2) = 1.0;
  const Vec3 x{0.1, 0.2, 0.3};
  const cplx a = oracle::semigroup_pointwise(v, 0.0, 1, x), b = oracle::semigroup_pointwise(v, 0.9, 1, x);
  EXPECT_NEAR(std::abs(b - a * std::polar(1.0, 0.9)), 0.0, 1e-14);
}

TEST(Oracle, BilinearSingleMode) {
  const Grid g(8, 1.0);
  const SpectralField a = random_field(g, 5);
  SpectralField b(g);
  b.at(1, 0, 0) = 1.0;
  const oracle::PairSymbol one = [](const Vec3&, const Vec3&) { return cplx(1.0); };
  const SpectralField c = oracle::bilinear_direct(a, b, one, 1, 1, 1, 0.0);
  const double w = 1.0 / g.box_volume();
  for (int k1 = -3; k1 < 4; ++k1)
    for (int k2 = -4; k2 < 4; ++k2)
      for (int k3 = -4; k3 < 4; ++k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) continue;  // mean mode is not computed
        EXPECT_NEAR(std::abs(c.at(k1, k2, k3) - w * a.at(k1 - 1, k2, k3)), 0.0, 1e-12);
      }
}

TEST(Oracle, OperatorNorms) {
  const Grid g(8, 1.0);
  const oracle::LinearOp id = [](const SpectralField& f) { return f; };
  const oracle::LinearOp zero = [](const SpectralField& f) { return SpectralField(f.grid()); };
  EXPECT_NEAR(oracle::operator_norm_probe(id, id, g, 2).estimate(), 1.0, 1e-12);
  EXPECT_EQ(oracle::operator_norm_probe(zero, zero, g, 2).estimate(), 0.0);
  const oracle::LinearOp half = [](const SpectralField& f) { return 0.5 * f; };
  EXPECT_NEAR(oracle::operator_norm_probe(half, half, g, 2).estimate(), 0.5, 1e-12);
}
