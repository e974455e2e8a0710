#include "ec/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "detail.hpp"

namespace ec {

namespace {

const cplx I(0.0, 1.0);

double sgn(int s) { return s > 0 ? 1.0 : -1.0; }

// Physical samples of each component.
std::array<CArray, 3> to_physical(const VectorField& u) {
  return {inverse_transform(u[0]), inverse_transform(u[1]), inverse_transform(u[2])};
}

SpectralField product(const Grid& g, const CArray& a, const CArray& b) {
  CArray p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  SpectralField f = transform(g, p);
  dealias_inplace(f);
  return f;
}

// -e^{-mu it Lambda} P_mu P_L w for the divergence w already formed.
VectorField finish(VectorField w, int mu, double t) {
  w = leray_project(w);
  w = helical_project(w, mu);
  for (auto& c : w.c) semigroup_inplace(c, t, -mu);
  w *= -1.0;
  w.divergence_free = true;
  return w;
}

}  // namespace

std::array<SignTriple, 8> all_sign_triples() {
  std::array<SignTriple, 8> out;
  int i = 0;
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) out[i++] = {a, b, c};
  return out;
}

GaugeFrame gauge_frame(const Vec3& xi) {
  const double rh = std::hypot(xi[0], xi[1]);
  if (rh == 0.0) throw std::domain_error("gauge_frame: xi_h = 0 (frame undefined on the vertical axis)");
  const double r = std::hypot(rh, xi[2]);
  GaugeFrame f;
  f.g1 = {-xi[1] / rh, xi[0] / rh, 0.0};
  f.g2 = {-xi[0] * xi[2] / (rh * r), -xi[1] * xi[2] / (rh * r), rh / r};
  return f;
}

cplx r_symbol(const Vec3& xi, const std::array<cplx, 3>& v, int sign) {
  const double rh = std::hypot(xi[0], xi[1]);
  if (rh == 0.0) return 0.0;
  const double r = std::hypot(rh, xi[2]);
  const cplx cross3 = xi[0] * v[1] - xi[1] * v[0];
  return 0.5 * (I * cross3 / rh + sgn(sign) * r / rh * v[2]);
}

std::array<cplx, 3> r_inverse_symbol(const Vec3& xi, int sign) {
  const GaugeFrame f = gauge_frame(xi);
  const double s = sgn(sign);
  return {-I * f.g1[0] + s * f.g2[0], -I * f.g1[1] + s * f.g2[1], -I * f.g1[2] + s * f.g2[2]};
}

bool axis_clear(const SpectralField& G) {
  const Grid& g = G.grid();
  const int h = g.n() / 2;
  const double m = max_abs(G);
  for (int k3 = -h; k3 < h; ++k3)
    if (std::abs(G.at(0, 0, k3)) > 1e-13 * m) return false;
  return true;
}

void clear_axis(SpectralField& G) {
  const int h = G.grid().n() / 2;
  for (int k3 = -h; k3 < h; ++k3) G.at(0, 0, k3) = 0.0;
}

SpectralField r_pm(const VectorField& u, int sign) {
  if (divergence_residual(u) > 1e-10) throw std::invalid_argument("r_pm: input is not divergence-free");
  SpectralField out(u.grid());
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    out[i] = r_symbol({a, b, c}, {u[0][i], u[1][i], u[2][i]}, sign);
  });
  return out;
}

VectorField r_pm_inverse(const SpectralField& G, int sign) {
  if (!axis_clear(G)) throw std::invalid_argument("r_pm_inverse: scalar has modes on the vertical axis");
  VectorField out(G.grid(), true);
  detail::for_modes(G.grid(), [&](std::size_t i, double a, double b, double c) {
    if (a == 0.0 && b == 0.0) return;
    const auto w = r_inverse_symbol({a, b, c}, sign);
    for (int j = 0; j < 3; ++j) out[j][i] = G[i] * w[j];
  });
  return out;
}

VectorProfile profiles_from_velocity(const VectorField& u, double t) {
  auto [p, m] = helical_split(u);
  VectorProfile out{semigroup(p, t, -1), semigroup(m, t, +1), t};
  out.plus.divergence_free = out.minus.divergence_free = true;
  return out;
}

VectorField velocity_from_profiles(const VectorProfile& p) {
  VectorField u(p.plus.grid(), true);
  const double t = p.time;
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    const double k = detail::modulus(a, b, c);
    const cplx e = k == 0.0 ? cplx(1.0) : std::polar(1.0, t * c / k);
    for (int j = 0; j < 3; ++j) u[j][i] = e * p.plus[j][i] + std::conj(e) * p.minus[j][i];
  });
  return u;
}

VectorField nonlinearity(const VectorField& f1, const VectorField& f2, SignTriple s, double t) {
  detail::check_same_grid(f1.grid(), f2.grid());
  const Grid& g = f1.grid();
  const auto a = to_physical(semigroup(f1, t, s.mu1));
  const auto b = to_physical(semigroup(f2, t, s.mu2));
  VectorField w(g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      SpectralField p = product(g, a[i], b[j]);
      detail::for_modes(g, [&](std::size_t idx, double x1, double x2, double x3) {
        const double xi_i = i == 0 ? x1 : (i == 1 ? x2 : x3);
        w[j][idx] += I * xi_i * p[idx];
      });
    }
  return finish(std::move(w), s.mu, t);
}

VectorField nonlinearity_curl_form(const VectorField& f1, const VectorField& f2, SignTriple s, double t) {
  detail::check_same_grid(f1.grid(), f2.grid());
  const Grid& g = f1.grid();
  const auto a = to_physical(semigroup(f1, t, s.mu1));
  VectorField lb = semigroup(f2, t, s.mu2);
  for (auto& c : lb.c) c = differential(c, DiffKind::modulus);
  const auto b = to_physical(lb);
  VectorField w(g);
  const double m2 = sgn(s.mu2);
  // -(a x mu2|grad|b), so that finish() restores the sign of the curl form.
  w[0] = product(g, a[1], b[2]) - product(g, a[2], b[1]);
  w[1] = product(g, a[2], b[0]) - product(g, a[0], b[2]);
  w[2] = product(g, a[0], b[1]) - product(g, a[1], b[0]);
  w *= -m2;
  return finish(std::move(w), s.mu, t);
}

VectorField euler_nonlinearity(const VectorField& u) {
  const Grid& g = u.grid();
  const auto a = to_physical(u);
  VectorField w(g);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      SpectralField p = product(g, a[i], a[j]);
      detail::for_modes(g, [&](std::size_t idx, double x1, double x2, double x3) {
        const double xs[3] = {x1, x2, x3};
        w[j][idx] += I * xs[i] * p[idx];
        if (j != i) w[i][idx] += I * xs[j] * p[idx];
      });
    }
  w = leray_project(w);
  w *= -1.0;
  w.divergence_free = true;
  return w;
}

std::pair<VectorField, VectorField> rhs_profile(const VectorProfile& p) {
  const VectorField w = euler_nonlinearity(velocity_from_profiles(p));
  const Grid& g = w.grid();
  VectorField dp(g, true), dm(g, true);
  const double t = p.time;
  // P_+- w = (w +- i xi x w / |xi|) / 2, then e^{-+ it Lambda}.
  detail::for_modes(g, [&](std::size_t i, double a, double b, double c) {
    const double k = detail::modulus(a, b, c);
    if (k == 0.0) return;
    const cplx e = std::polar(1.0, t * c / k);
    const cplx w1 = w[0][i], w2 = w[1][i], w3 = w[2][i];
    const cplx c1 = I * (b * w3 - c * w2) / k, c2 = I * (c * w1 - a * w3) / k, c3 = I * (a * w2 - b * w1) / k;
    const cplx ep = 0.5 * std::conj(e), em = 0.5 * e;
    dp[0][i] = ep * (w1 + c1), dp[1][i] = ep * (w2 + c2), dp[2][i] = ep * (w3 + c3);
    dm[0][i] = em * (w1 - c1), dm[1][i] = em * (w2 - c2), dm[2][i] = em * (w3 - c3);
  });
  return {std::move(dp), std::move(dm)};
}

}  // namespace ec
