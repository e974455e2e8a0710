#include "ec/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace ec::oracle {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void two_sum(double& s, double& c, double v) {
  const double t = s + v;
  if (std::fabs(s) >= std::fabs(v))
    c += (s - t) + v;
  else
    c += (v - t) + s;
  s = t;
}

// Lambda written out separately from ec::dispersion.
double lam(double a, double b, double c) {
  const double r = std::hypot(std::hypot(a, b), c);
  return r > 0.0 ? c / r : 0.0;
}

int wrap_freq(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

void CompensatedSum::add(cplx v) {
  two_sum(sr_, cr_, v.real());
  two_sum(si_, ci_, v.imag());
}

SpectralField dft_direct(const Grid& g, const CArray& phys, const Budget& budget) {
  const int n = g.n();
  if (n > budget.max_dft_n) throw std::invalid_argument("dft_direct: grid exceeds oracle budget");
  if (phys.size() != g.size()) throw std::invalid_argument("dft_direct: dimension mismatch");
  const double L = g.L();
  const double h = kTwoPi * L / n;
  std::vector<double> xs(n), ks(n);
  for (int j = 0; j < n; ++j) xs[j] = -0.5 * kTwoPi * L + j * h;
  for (int i = 0; i < n; ++i) ks[i] = wrap_freq(i, n) / L;
  SpectralField out(g);
  const double w = h * h * h;
  std::size_t oidx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++oidx) {
        CompensatedSum s;
        std::size_t iidx = 0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r, ++iidx) {
              const double ang = -(ks[a] * xs[p] + ks[b] * xs[q] + ks[c] * xs[r]);
              s.add(phys[iidx] * cplx(std::cos(ang), std::sin(ang)));
            }
        out[oidx] = w * s.value();
      }
  return out;
}

SpectralField bilinear_direct(const SpectralField& g1, const SpectralField& g2, const PairSymbol& m,
                              int mu, int mu1, int mu2, double t, const Budget& budget) {
  const Grid& g = g1.grid();
  if (g != g2.grid()) throw std::invalid_argument("bilinear_direct: grid mismatch");
  const int n = g.n();
  if (n > budget.max_bilinear_n) throw std::invalid_argument("bilinear_direct: grid exceeds oracle budget");
  const double L = g.L();
  const int h = n / 2;
  auto at = [&](const SpectralField& f, int k1, int k2, int k3) {
    return f[(std::size_t((k1 + n) % n) * n + (k2 + n) % n) * n + (k3 + n) % n];
  };
  // Nonzero support of G2 gathered once.
  struct Mode {
    int k1, k2, k3;
    cplx v;
  };
  std::vector<Mode> supp2;
  for (int k1 = -h; k1 < h; ++k1)
    for (int k2 = -h; k2 < h; ++k2)
      for (int k3 = -h; k3 < h; ++k3) {
        const cplx v = at(g2, k1, k2, k3);
        if (v != cplx(0.0)) supp2.push_back({k1, k2, k3, v});
      }
  SpectralField out(g);
  const double norm = 1.0 / std::pow(kTwoPi * L, 3);
  for (int k1 = -h; k1 < h; ++k1)
    for (int k2 = -h; k2 < h; ++k2)
      for (int k3 = -h; k3 < h; ++k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) continue;
        const Vec3 xi{k1 / L, k2 / L, k3 / L};
        const double lx = lam(xi[0], xi[1], xi[2]);
        CompensatedSum s;
        for (const auto& md : supp2) {
          const int d1 = k1 - md.k1, d2 = k2 - md.k2, d3 = k3 - md.k3;
          if (d1 < -h || d1 >= h || d2 < -h || d2 >= h || d3 < -h || d3 >= h) continue;
          const cplx a = at(g1, d1, d2, d3);
          if (a == cplx(0.0)) continue;
          const Vec3 eta{md.k1 / L, md.k2 / L, md.k3 / L};
          const double phase = -mu * lx + mu1 * lam(d1 / L, d2 / L, d3 / L) + mu2 * lam(eta[0], eta[1], eta[2]);
          s.add(cplx(std::cos(t * phase), std::sin(t * phase)) * m(xi, eta) * a * md.v);
        }
        out[(std::size_t((k1 + n) % n) * n + (k2 + n) % n) * n + (k3 + n) % n] = norm * s.value();
      }
  return out;
}

cplx semigroup_pointwise(const SpectralField& f, double t, int sign, const Vec3& x, const Budget& budget) {
  const Grid& g = f.grid();
  const int n = g.n();
  if (n > budget.max_pointwise_n) throw std::invalid_argument("semigroup_pointwise: grid exceeds oracle budget");
  const double L = g.L();
  CompensatedSum s;
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) {
        if (f[idx] == cplx(0.0)) continue;
        const double x1 = wrap_freq(a, n) / L, x2 = wrap_freq(b, n) / L, x3 = wrap_freq(c, n) / L;
        const double ang = (sign > 0 ? t : -t) * lam(x1, x2, x3) + x1 * x[0] + x2 * x[1] + x3 * x[2];
        s.add(f[idx] * cplx(std::cos(ang), std::sin(ang)));
      }
  return s.value() / std::pow(kTwoPi * L, 3);
}

namespace {
double plain_norm(const SpectralField& f) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) two_sum(s, c, std::norm(f[i]));
  return std::sqrt(s + c);
}
}  // namespace

NormEstimate operator_norm_probe(const LinearOp& op, const LinearOp& adjoint, const Grid& g, int trials,
                                 int power_iterations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto gaussian = [&] {
    SpectralField x(g);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(nd(rng), nd(rng));
    return x;
  };
  NormEstimate est;
  for (int tr = 0; tr < trials; ++tr) {
    SpectralField x = gaussian();
    const double nx = plain_norm(x);
    if (nx == 0.0) continue;
    est.gaussian = std::max(est.gaussian, plain_norm(op(x)) / nx);
  }
  // The power iteration starts from A* applied to a Gaussian so that the
  // start vector lies in the range of A*A.
  SpectralField v = adjoint(gaussian());
  double nv = plain_norm(v);
  if (nv == 0.0) return est;
  v *= 1.0 / nv;
  for (int it = 0; it < power_iterations; ++it) {
    SpectralField av = op(v);
    const double nav = plain_norm(av);
    est.power = std::max(est.power, nav);
    if (nav == 0.0) break;
    v = adjoint(av);
    nv = plain_norm(v);
    if (nv == 0.0) break;
    v *= 1.0 / nv;
  }
  return est;
}

}  // namespace ec::oracle
