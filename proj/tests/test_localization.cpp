#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ec/localization.hpp"
#include "ec/solver.hpp"

using namespace ec;

namespace {

SpectralField random_axis_free(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = g.lattice(i);
    if ((k[0] == 0 && k[1] == 0) || !retained(g, k[0], k[1], k[2])) continue;
    f[i] = {nd(rng), nd(rng)};
  }
  return f;
}

}  // namespace

TEST(Cutoff, DyadicPartition) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(-12, 12);
  for (int s = 0; s < 200; ++s) {
    const double r = std::exp2(ud(rng));
    double sum = 0.0;
    for (int k = -40; k <= 40; ++k) sum += cutoff::phi(std::ldexp(r, -k));
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Cutoff, HorizontalVerticalExamples) {
  EXPECT_EQ(cutoff::chi_h(dispersion({1, 0, 0.1})), 1.0);
  EXPECT_EQ(cutoff::chi_v(dispersion({0.1, 0, 1})), 1.0);
  for (double lam : {0.0, 0.3, 0.57, 0.58, 0.7, 1.0}) EXPECT_NEAR(cutoff::chi_h(lam) + cutoff::chi_v(lam), 1.0, 1e-15);
}

TEST(Cutoff, RingPartition) {
  for (double x = -3.0; x <= 3.0; x += 0.0137) {
    double sum = 0.0;
    for (int j = -6; j <= 6; ++j) sum += cutoff::phi_q(x - j);
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(cutoff::phi_q(0.6 + 1e-9 + std::fabs(x)), 0.0);
  }
}

TEST(Spatial, ZPartitionAndPlateau) {
  for (double z : {0.01, 0.7, 1.5, 3.3, 100.0}) {
    double sum = 0.0;
    for (int l = -30; l <= 30; ++l) sum += SpatialSelector{SpatialKind::Z, l}.weight({0.2, -0.4, z});
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_EQ((SpatialSelector{SpatialKind::Z, 0}.weight({0, 0, 1.5})), 1.0);
  EXPECT_EQ((SpatialSelector{SpatialKind::Z, 0}.weight({0, 0, -1.5})), 1.0);
  EXPECT_EQ((SpatialSelector{SpatialKind::Z_mod, -3, 2}.weight({0, 0, 0.1})), 0.0);
}

TEST(Spatial, ZLocalizeMatchesPointwise) {
  const Grid g(16, 1.0);
  const SpectralField f = random_axis_free(g, 2);
  const SpatialSelector z{SpatialKind::Z, 0};
  const CArray a = inverse_transform(f);
  const CArray b = inverse_transform(spatial_localize(f, z));
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(std::abs(b[i] - z.weight(g.position(i)) * a[i]), 0.0, 1e-12);
}

TEST(Projection, DyadicSumAndIdempotence) {
  const Grid g(32, 1.0);
  const SpectralField f = random_axis_free(g, 3);
  SpectralField sum(g);
  for (int k = -4; k <= 5; ++k) {
    Selector s;
    s.k = k;
    sum += project(f, s).field;
  }
  EXPECT_LT(l2_norm(sum - f), 1e-12 * l2_norm(f));
  Selector h;
  h.family = Family::h;
  h.tilde = true;
  Selector hh;
  hh.family = Family::h;
  const SpectralField once = project(f, hh).field;
  EXPECT_LT(l2_norm(project(once, h).field - once), 1e-12 * l2_norm(once));
}

TEST(Projection, ResolvableIsFamilyAware) {
  const Grid g({64, 64, 8}, {1.0, 1.0, 1.0});
  EXPECT_TRUE(ring_resolvable(g, 3, Family::h));
  EXPECT_FALSE(ring_resolvable(g, 3, Family::v));
  EXPECT_FALSE(ring_resolvable(g, 3, Family::all));
}

TEST(Selector, Parse) {
  const ParsedSelector a = parse_selector("Pk:h:q=-3:k=0");
  EXPECT_EQ(a.kind, ParsedSelector::Kind::fourier);
  EXPECT_EQ(a.fourier.family, Family::h);
  EXPECT_EQ(a.fourier.q.value(), -3);
  EXPECT_EQ(a.fourier.k.value(), 0);
  const ParsedSelector z = parse_selector("Z:l=4");
  EXPECT_EQ(z.kind, ParsedSelector::Kind::spatial);
  EXPECT_EQ(z.spatial.l, 4);
  const ParsedSelector q = parse_selector("Q:J=5:j=12");
  EXPECT_EQ(q.kind, ParsedSelector::Kind::ring);
  EXPECT_EQ(q.J, 5);
  EXPECT_EQ(q.j, 12);
  EXPECT_THROW(parse_selector("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_selector(""), std::invalid_argument);
}

TEST(Rings, PartitionAndDisjointness) {
  const Grid g(16, 1.0);
  const SpectralField f = random_axis_free(g, 4);
  const int J = 1;
  const auto [lo, hi] = ring_index_range(g, J);
  SpectralField sum(g);
  for (long j = lo; j <= hi; ++j) sum += ring_localize(f, J, j).field;
  EXPECT_LT(l2_norm(sum - f), 1e-12 * l2_norm(f));
  for (long j = lo; j + 2 <= hi; ++j) {
    const SpectralField a = ring_localize(ring_localize(f, J, j).field, J, j + 2).field;
    EXPECT_EQ(l2_norm(a), 0.0);
  }
}

// Children of a level-J ring j satisfy |j' - 4j| <= 2, so children of adjacent
// parents are at most 8 apart (gap 9 is impossible, 8 occurs).
TEST(Rings, NestingGap) {
  const double step = 1e-3;
  auto overlap = [&](int J, long j, long jp) {
    for (double y = j - 0.6; y <= j + 0.6; y += step) {
      const double s = std::ldexp(y, -2 * J);
      if (cutoff::phi_q(y - j) > 0 && cutoff::phi_q(std::ldexp(s, 2 * (J + 1)) - jp) > 0) return true;
    }
    return false;
  };
  const int J = 5;
  long widest = 0;
  for (long j1 = 10; j1 <= 12; ++j1)
    for (long j2 = j1 - 1; j2 <= j1 + 1; ++j2)
      for (long a = 4 * j1 - 4; a <= 4 * j1 + 4; ++a)
        for (long b = 4 * j2 - 4; b <= 4 * j2 + 4; ++b)
          if (overlap(J, j1, a) && overlap(J, j2, b)) widest = std::max(widest, std::labs(a - b));
  EXPECT_EQ(widest, 8);
  // Fact (ii): children of ring j2 sit where the three rings around j2 sum to 1.
  for (long jp = 4 * 11 - 2; jp <= 4 * 11 + 2; ++jp)
    for (double y = (jp - 0.6) / 4.0; y <= (jp + 0.6) / 4.0; y += step) {
      double sum = 0.0;
      for (long j1 = 10; j1 <= 12; ++j1) sum += cutoff::phi_q(y - j1);
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(WavePacket, LevelRule) {
  WavePacketGeometry geo;
  geo.m = 6;
  geo.J = 5;
  geo.j = 0;
  const double t = 64.0;
  const double a = t / geo.rho1(), b = t / geo.rho2();
  EXPECT_EQ(wavepacket_sets(geo, {0.5, 0, -(a + b) / 2}, t).level, 0);
  // distance = 2^{2J - m} |x3 + t/rho1| = 5.
  const Membership m = wavepacket_sets(geo, {0, 0, -(a + 5.0 / 16.0)}, t);
  EXPECT_TRUE(m.in_cylinder);
  EXPECT_NEAR(m.distance, 5.0, 1e-9);
  EXPECT_EQ(m.level, 2);
  EXPECT_FALSE(wavepacket_sets(geo, {0, 0, 1.0}, t).in_cylinder);
  EXPECT_FALSE(wavepacket_sets(geo, {1e4, 0, -a}, t).in_cylinder);
  EXPECT_FALSE(geo.admissible());
}

TEST(Telescope, ExactForAnyBilinear) {
  const Grid g(16, 1.0);
  const SpectralField g1 = random_axis_free(g, 5), g2 = random_axis_free(g, 6);
  const Bilinear B = [](const SpectralField& a, const SpectralField& b) {
    const CArray x = inverse_transform(a), y = inverse_transform(b);
    CArray z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * std::conj(y[i]);
    return transform(a.grid(), z);
  };
  const auto pieces = telescope(B, g1, g2, 0, 2);
  SpectralField sum(g);
  for (const auto& p : pieces) sum += p.value;
  const SpectralField full = B(g1, g2);
  EXPECT_LT(l2_norm(sum - full), 1e-12 * l2_norm(full));
  for (const auto& p : pieces)
    if (p.group == 2) EXPECT_LE(std::labs(p.j1 - p.j2), 8);
}
