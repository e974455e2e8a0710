#include "ec/multipliers.hpp"

#include <cmath>
#include <functional>
#include <algorithm>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "detail.hpp"

namespace ec {

namespace {

const cplx I(0.0, 1.0);

double norm3(const Vec3& v) { return std::hypot(std::hypot(v[0], v[1]), v[2]); }
double normh(const Vec3& v) { return std::hypot(v[0], v[1]); }
double lam_of(const Vec3& v) { return v[2] / norm3(v); }
double sq_of(double lam) { return std::sqrt(std::max(0.0, 1.0 - lam * lam)); }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot_h(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1]; }
// a_h^perp . b_h with (a1, a2)^perp = (-a2, a1)
double perp_dot(const Vec3& a, const Vec3& b) { return -a[1] * b[0] + a[0] * b[1]; }

struct Pieces {
  double A, ue, pe, W, lx, le, sx, se;
};

Pieces pieces(const MultiplierSample& s) {
  check_sample(s);
  const Vec3& xi = s.xi;
  const Vec3& eta = s.eta;
  const Vec3 d = sub(xi, eta);
  const double nx = normh(xi), ne = normh(eta), nd = normh(d);
  Pieces p;
  p.A = perp_dot(d, xi) / nd;
  p.ue = dot_h(xi, eta) / (nx * ne);
  p.pe = perp_dot(xi, eta) / (nx * ne);
  p.W = w_symbol(xi, eta);
  p.lx = lam_of(xi);
  p.le = lam_of(eta);
  p.sx = sq_of(p.lx);
  p.se = sq_of(p.le);
  return p;
}

}  // namespace

void check_sample(const MultiplierSample& s) {
  const Vec3 d = sub(s.xi, s.eta);
  if (normh(s.xi) == 0.0 || normh(s.eta) == 0.0 || normh(d) == 0.0)
    throw std::domain_error("multiplier sample with vanishing horizontal frequency");
}

double phase(const MultiplierSample& s) {
  const Vec3 d = sub(s.xi, s.eta);
  if (norm3(s.xi) == 0.0 || norm3(s.eta) == 0.0 || norm3(d) == 0.0)
    throw std::domain_error("phase: zero frequency");
  return -s.signs.mu * lam_of(s.xi) + s.signs.mu1 * lam_of(d) + s.signs.mu2 * lam_of(s.eta);
}

std::array<double, 2> sigma_bar(const Vec3& xi, const Vec3& eta) {
  return {xi[2] * eta[0] - eta[2] * xi[0], xi[2] * eta[1] - eta[2] * xi[1]};
}

double w_symbol(const Vec3& xi, const Vec3& eta) {
  const Vec3 d = sub(xi, eta);
  const double nd = normh(d);
  if (nd == 0.0) throw std::domain_error("W: (xi - eta)_h = 0");
  const double ld = lam_of(d);
  return -ld * dot_h(xi, d) / nd + xi[2] * sq_of(ld);
}

cplx m1(const MultiplierSample& s) {
  const Pieces p = pieces(s);
  return -0.5 * p.A * p.ue;
}

cplx m2(const MultiplierSample& s) {
  const Pieces p = pieces(s);
  return -0.5 * s.signs.mu * s.signs.mu2 * p.A;
}

cplx m3(const MultiplierSample& s) {
  const Pieces p = pieces(s);
  const double mu = s.signs.mu, mu1 = s.signs.mu1, mu2 = s.signs.mu2;
  const double cc = p.lx * p.le * p.ue + p.sx * p.se;
  cplx r = 0.0;
  r += 0.5 * I * mu2 * p.le * p.A * p.pe;
  r += 0.5 * I * mu * p.lx * p.A * p.pe;
  r -= 0.5 * mu1 * mu2 * p.W * p.le * p.pe;
  r -= 0.5 * mu * mu1 * p.W * p.lx * p.pe;
  r += 0.5 * mu * mu2 * (1.0 - cc) * p.A;
  r -= 0.5 * I * mu * mu1 * mu2 * p.W * cc;
  r -= 0.5 * I * mu1 * p.W * p.ue;
  return r;
}

cplx m_total(const MultiplierSample& s) { return m1(s) + m2(s) + m3(s); }

cplx m_component(const MultiplierSample& s, int which) {
  switch (which) {
    case 1:
      return m1(s);
    case 2:
      return m2(s);
    case 3:
      return m3(s);
    case 0:
      return m_total(s);
  }
  throw std::invalid_argument("m_component: which must be 0..3");
}

cplx m_sym(const MultiplierSample& s, int which) {
  if (s.signs.mu1 != s.signs.mu2) throw std::invalid_argument("m_sym: requires mu1 == mu2");
  if (which != 1 && which != 2) throw std::invalid_argument("m_sym: which must be 1 or 2");
  MultiplierSample t = s;
  t.eta = sub(s.xi, s.eta);
  return m_component(s, which) + m_component(t, which);
}

cplx m_sym_factored(const MultiplierSample& s, int which) {
  if (s.signs.mu1 != s.signs.mu2) throw std::invalid_argument("m_sym_factored: requires mu1 == mu2");
  check_sample(s);
  const Vec3 d = sub(s.xi, s.eta);
  const double nx = normh(s.xi), ne = normh(s.eta), nd = normh(d);
  const double cross = perp_dot(s.eta, s.xi);
  const double null = ne - nd;
  if (which == 1) return cross * (ne + nd) * null / (2.0 * nd * nx * ne);
  if (which == 2) return 0.5 * s.signs.mu * s.signs.mu1 * cross * null / (nd * ne);
  throw std::invalid_argument("m_sym_factored: which must be 1 or 2");
}

namespace {

using Fn = std::function<double(const Vec3&)>;
using VFn = std::function<std::array<double, 3>(const Vec3&)>;

// Central difference of F along the field v(eta) at eta.
std::array<double, 3> directional(const VFn& F, const Vec3& eta, const Vec3& v, double h) {
  const Vec3 p{eta[0] + h * v[0], eta[1] + h * v[1], eta[2] + h * v[2]};
  const Vec3 m{eta[0] - h * v[0], eta[1] - h * v[1], eta[2] - h * v[2]};
  const auto a = F(p), b = F(m);
  return {(a[0] - b[0]) / (2 * h), (a[1] - b[1]) / (2 * h), (a[2] - b[2]) / (2 * h)};
}

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::hypot(std::hypot(a[0] - b[0], a[1] - b[1]), a[2] - b[2]);
}

VFn scalar(const Fn& f) {
  return [f](const Vec3& z) { return std::array<double, 3>{f(z), 0.0, 0.0}; };
}

// Smooth, non-polynomial test function of the frequency xi - eta.
double test_fn(const Vec3& z) {
  return std::exp(-(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) / 8.0) * std::cos(z[0] - 0.5 * z[1] + 0.3 * z[2]) +
         0.1 * z[0] * z[2] * z[2];
}

}  // namespace

std::vector<IdentityResidual> vf_identity_residuals(const MultiplierSample& s, double h) {
  check_sample(s);
  const Vec3 xi = s.xi, eta = s.eta;
  const Vec3 d = sub(xi, eta);
  const auto sb = sigma_bar(xi, eta);
  const double nd3 = std::pow(norm3(d), 3);
  const double ndh = normh(d);
  const Vec3 S_eta = eta;
  const Vec3 O_eta{-eta[1], eta[0], 0.0};

  struct Case {
    std::string name;
    // Left side as a function of h, right side in closed form.
    std::function<std::array<double, 3>(double)> lhs;
    std::array<double, 3> rhs;
    bool linear = false;  // field linear in eta, central differences are exact
  };
  std::vector<Case> cases;

  auto along = [&](const VFn& F, const Vec3& v) {
    return [=](double hh) { return directional(F, eta, v, hh); };
  };
  // Fields on eta for functions of eta at fixed xi.
  const VFn lam_d = scalar([xi](const Vec3& e) { return lam_of(sub(xi, e)); });
  cases.push_back({"S_eta Lambda(xi-eta)", along(lam_d, S_eta), {(d[0] * sb[0] + d[1] * sb[1]) / nd3, 0, 0}});
  cases.push_back({"Omega_eta Lambda(xi-eta)", along(lam_d, O_eta), {-(-d[1] * sb[0] + d[0] * sb[1]) / nd3, 0, 0}});

  const VFn id = [](const Vec3& e) { return std::array<double, 3>{e[0], e[1], e[2]}; };
  const VFn diff = [xi](const Vec3& e) { return std::array<double, 3>{xi[0] - e[0], xi[1] - e[1], xi[2] - e[2]}; };
  cases.push_back({"S_eta eta", along(id, S_eta), {eta[0], eta[1], eta[2]}, true});
  cases.push_back({"S_eta (xi-eta)", along(diff, S_eta), {-eta[0], -eta[1], -eta[2]}, true});
  cases.push_back({"Omega_eta eta", along(id, O_eta), {-eta[1], eta[0], 0.0}, true});

  const VFn mod_d = scalar([xi](const Vec3& e) { return norm3(sub(xi, e)); });
  const VFn modh_d = scalar([xi](const Vec3& e) { return normh(sub(xi, e)); });
  const double eta_dot_d = eta[0] * d[0] + eta[1] * d[1] + eta[2] * d[2];
  cases.push_back({"S_eta |xi-eta|", along(mod_d, S_eta), {-eta_dot_d / norm3(d), 0, 0}});
  cases.push_back({"Omega_eta |xi-eta|", along(mod_d, O_eta), {perp_dot(xi, eta) / norm3(d), 0, 0}});
  cases.push_back({"S_eta |(xi-eta)_h|", along(modh_d, S_eta), {-dot_h(eta, d) / ndh, 0, 0}});
  cases.push_back({"Omega_eta |(xi-eta)_h|", along(modh_d, O_eta), {perp_dot(xi, eta) / ndh, 0, 0}});

  const VFn sbar = [xi](const Vec3& e) {
    const auto v = sigma_bar(xi, e);
    return std::array<double, 3>{v[0], v[1], 0.0};
  };
  cases.push_back({"S_eta sigma_bar", along(sbar, S_eta), {sb[0], sb[1], 0.0}, true});
  cases.push_back({"Omega_eta sigma_bar", along(sbar, O_eta), {-xi[2] * eta[1], xi[2] * eta[0], 0.0}, true});

  // Operator identities applied to a test function F(xi - eta). The right
  // sides use difference quotients in the variable zeta = xi - eta.
  const VFn Fe = scalar([xi](const Vec3& e) { return test_fn(sub(xi, e)); });
  const VFn Fz = scalar([](const Vec3& z) { return test_fn(z); });
  auto dz = [&](const Vec3& v, double hh) { return directional(Fz, d, v, hh)[0]; };
  const Vec3 S_d = d;
  const Vec3 O_d{-d[1], d[0], 0.0};
  const Vec3 e3{0.0, 0.0, 1.0};
  const double h2 = ndh * ndh;
  const double c_dot = dot_h(d, eta) / h2;    // (xi-eta)_h . eta_h / |.|^2
  const double c_perp = perp_dot(d, eta) / h2;  // (xi-eta)_h^perp . eta_h / |.|^2
  const double c_sig = (d[0] * sb[0] + d[1] * sb[1]) / h2;
  const double c_sigp = (-d[1] * sb[0] + d[0] * sb[1]) / h2;

  struct OpCase {
    std::string name;
    Vec3 field;
    std::function<double(double)> rhs;
  };
  std::vector<OpCase> ops;
  ops.push_back({"bb1 S_eta", S_eta, [&](double hh) {
                   return -c_dot * dz(S_d, hh) - c_perp * dz(O_d, hh) + c_sig * dz(e3, hh);
                 }});
  ops.push_back({"bb2 Omega_eta", O_eta, [&](double hh) {
                   return c_perp * dz(S_d, hh) - c_dot * dz(O_d, hh) - c_sigp * dz(e3, hh);
                 }});
  if (d[2] != 0.0) {
    ops.push_back({"bb3 S_eta", S_eta, [&](double hh) {
                     const Vec3 sv{sb[0], sb[1], 0.0};
                     return -eta[2] / d[2] * dz(S_d, hh) - dz(sv, hh) / d[2];
                   }});
  }
  ops.push_back({"bb3 Omega_eta", O_eta, [&](double hh) {
                   const Vec3 xp{-xi[1], xi[0], 0.0};
                   return dz(O_d, hh) - dz(xp, hh);
                 }});

  std::vector<IdentityResidual> out;
  const double hs[3] = {h, h / 2, h / 4};
  for (const auto& c : cases) {
    IdentityResidual r;
    r.name = c.name;
    std::array<std::array<double, 3>, 3> fd;
    for (int i = 0; i < 3; ++i) {
      fd[i] = c.lhs(hs[i]);
      r.residual[i] = dist3(fd[i], c.rhs);
    }
    std::array<double, 3> rich;
    for (int k = 0; k < 3; ++k) rich[k] = (4.0 * fd[1][k] - fd[0][k]) / 3.0;
    r.richardson = dist3(rich, c.rhs);
    r.exact = c.linear;
    out.push_back(r);
  }
  for (const auto& c : ops) {
    IdentityResidual r;
    r.name = c.name;
    std::array<double, 3> diffs;
    for (int i = 0; i < 3; ++i) {
      const double lhs = directional(Fe, eta, c.field, hs[i])[0];
      diffs[i] = lhs - c.rhs(hs[i]);
      r.residual[i] = std::fabs(diffs[i]);
    }
    r.richardson = std::fabs((4.0 * diffs[1] - diffs[0]) / 3.0);
    out.push_back(r);
  }
  return out;
}

double Monomial::eval(const Vec3& z) const {
  const double r = norm3(z);
  if (r == 0.0) return 0.0;
  const double rh = normh(z);
  if ((a1 || a2) && rh == 0.0) return 0.0;
  const double l = z[2] / r;
  double v = 1.0;
  for (int i = 0; i < lam; ++i) v *= l;
  if (sq) {
    const double s = sq_of(l);
    for (int i = 0; i < sq; ++i) v *= s;
  }
  for (int i = 0; i < a1; ++i) v *= z[0] / rh;
  for (int i = 0; i < a2; ++i) v *= z[1] / rh;
  return v;
}

bool Monomial::operator<(const Monomial& o) const {
  return std::tie(lam, sq, a1, a2) < std::tie(o.lam, o.sq, o.a1, o.a2);
}

namespace {

Monomial operator*(const Monomial& a, const Monomial& b) {
  return {a.lam + b.lam, a.sq + b.sq, a.a1 + b.a1, a.a2 + b.a2};
}

struct Poly {
  SymbolPlan t;
};

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& x : a.t)
    for (const auto& y : b.t) r.t.push_back({x.c * y.c, x.d0 * y.d0, x.d1 * y.d1, x.d2 * y.d2});
  return r;
}

Poly operator+(Poly a, const Poly& b) {
  a.t.insert(a.t.end(), b.t.begin(), b.t.end());
  return a;
}

Poly operator*(cplx c, Poly a) {
  for (auto& x : a.t) x.c *= c;
  return a;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly one() { return {{{1.0, {}, {}, {}}}}; }

// Generators at slot 0 (xi), 1 (xi - eta) or 2 (eta).
Poly gen(int slot, Monomial m) {
  SymbolTerm t{1.0, {}, {}, {}};
  (slot == 0 ? t.d0 : slot == 1 ? t.d1 : t.d2) = m;
  return {{t}};
}
Poly L(int slot) { return gen(slot, {1, 0, 0, 0}); }
Poly Sq(int slot) { return gen(slot, {0, 1, 0, 0}); }
Poly A1(int slot) { return gen(slot, {0, 0, 1, 0}); }
Poly A2(int slot) { return gen(slot, {0, 0, 0, 1}); }

SymbolPlan collect(const Poly& p) {
  std::map<std::tuple<Monomial, Monomial, Monomial>, cplx> acc;
  for (const auto& x : p.t) acc[{x.d0, x.d1, x.d2}] += x.c;
  SymbolPlan out;
  for (const auto& [k, c] : acc)
    if (c != cplx(0.0)) out.push_back({c, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
  return out;
}

}  // namespace

SymbolPlan symbol_plan(int which, SignTriple s) {
  const double mu = s.mu, mu1 = s.mu1, mu2 = s.mu2;
  // All pieces below are divided by |xi|.
  const Poly A = Sq(0) * (A2(0) * A1(1) - A1(0) * A2(1));
  const Poly ue = A1(0) * A1(2) + A2(0) * A2(2);
  const Poly pe = A1(0) * A2(2) - A2(0) * A1(2);
  const Poly W = L(0) * Sq(1) - L(1) * Sq(0) * (A1(0) * A1(1) + A2(0) * A2(1));
  const Poly cc = L(0) * L(2) * ue + Sq(0) * Sq(2);
  const Poly p1 = cplx(-0.5) * (A * ue);
  const Poly p2 = cplx(-0.5 * mu * mu2) * A;
  Poly p3 = cplx(0.0, 0.5 * mu2) * (L(2) * A * pe);
  p3 = p3 + cplx(0.0, 0.5 * mu) * (L(0) * A * pe);
  p3 = p3 + cplx(-0.5 * mu1 * mu2) * (W * L(2) * pe);
  p3 = p3 + cplx(-0.5 * mu * mu1) * (W * L(0) * pe);
  p3 = p3 + cplx(0.5 * mu * mu2) * ((one() - cc) * A);
  p3 = p3 + cplx(0.0, -0.5 * mu * mu1 * mu2) * (W * cc);
  p3 = p3 + cplx(0.0, -0.5 * mu1) * (W * ue);
  switch (which) {
    case 1:
      return collect(p1);
    case 2:
      return collect(p2);
    case 3:
      return collect(p3);
    case 0:
      return collect(p1 + p2 + p3);
  }
  throw std::invalid_argument("symbol_plan: which must be 0..3");
}

SymbolPlan identity_plan() { return {{1.0, {}, {}, {}}}; }

cplx eval_plan(const SymbolPlan& plan, const Vec3& xi, const Vec3& eta) {
  const Vec3 d = sub(xi, eta);
  cplx s = 0.0;
  for (const auto& t : plan) s += t.c * t.d0.eval(xi) * t.d1.eval(d) * t.d2.eval(eta);
  return norm3(xi) * s;
}

SpectralField bilinear_factored(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t,
                                const SymbolPlan& plan) {
  detail::check_same_grid(g1.grid(), g2.grid());
  if (!axis_clear(g1) || !axis_clear(g2))
    throw std::invalid_argument("bilinear_factored: inputs carry modes on the vertical axis");
  const Grid& g = g1.grid();
  std::map<std::pair<Monomial, Monomial>, std::vector<const SymbolTerm*>> groups;
  for (const auto& term : plan) groups[{term.d1, term.d2}].push_back(&term);
  const SpectralField e1 = semigroup(g1, t, s.mu1);
  const SpectralField e2 = semigroup(g2, t, s.mu2);
  SpectralField out(g);
  for (const auto& [key, terms] : groups) {
    SpectralField f1 = e1, f2 = e2;
    detail::apply_symbol(f1, [&](double a, double b, double c) { return key.first.eval({a, b, c}); });
    detail::apply_symbol(f2, [&](double a, double b, double c) { return key.second.eval({a, b, c}); });
    const CArray p1 = inverse_transform(f1);
    const CArray p2 = inverse_transform(f2);
    CArray prod(p1.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = p1[i] * p2[i];
    SpectralField pr = transform(g, prod);
    dealias_inplace(pr);
    detail::for_modes(g, [&](std::size_t idx, double a, double b, double c) {
      if (pr[idx] == cplx(0.0)) return;
      const Vec3 xi{a, b, c};
      const double r = norm3(xi);
      if (r == 0.0) return;
      cplx sym = 0.0;
      for (const auto* term : terms) sym += term->c * term->d0.eval(xi);
      out[idx] += r * std::polar(1.0, -s.mu * t * c / r) * sym * pr[idx];
    });
  }
  return out;
}

SpectralField nonlinearity_scalar(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t) {
  const VectorField f1 = r_pm_inverse(g1, s.mu1);
  const VectorField f2 = r_pm_inverse(g2, s.mu2);
  SpectralField out = r_pm(nonlinearity(f1, f2, s, t), s.mu);
  clear_axis(out);
  return out;
}

ConsistencyResult nonlinearity_consistency(const SpectralField& g1, const SpectralField& g2, SignTriple s, double t) {
  const SpectralField lhs = nonlinearity_scalar(g1, g2, s, t);
  SpectralField rhs = bilinear_factored(g1, g2, s, t, symbol_plan(0, s));
  clear_axis(rhs);
  ConsistencyResult r;
  r.lhs_norm = l2_norm(lhs);
  r.rhs_norm = l2_norm(rhs);
  const double den = std::max(r.lhs_norm, r.rhs_norm);
  r.residual = den == 0.0 ? 0.0 : l2_norm(lhs - rhs) / den;
  return r;
}

MultiplierSample random_sample(std::mt19937_64& rng, SignTriple s) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (;;) {
    MultiplierSample m{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, s};
    const Vec3 d = sub(m.xi, m.eta);
    if (normh(m.xi) >= 1e-3 && normh(m.eta) >= 1e-3 && normh(d) >= 1e-3) return m;
  }
}

MultiplierAudit multiplier_audit(std::size_t samples, std::size_t resonant_samples, std::uint64_t seed) {
  MultiplierAudit a;
  a.seed = seed;
  a.samples = samples;
  a.resonant_samples = resonant_samples;
  std::mt19937_64 rng(seed);
  const auto triples = all_sign_triples();
  std::array<SymbolPlan, 8> plans;
  for (int i = 0; i < 8; ++i) plans[i] = symbol_plan(0, triples[i]);
  for (std::size_t n = 0; n < samples; ++n) {
    const MultiplierSample base = random_sample(rng, {});
    a.w_symmetry = std::max(a.w_symmetry, std::fabs(w_symbol(base.xi, base.eta) - w_symbol(base.eta, base.xi)));
    for (int ti = 0; ti < 8; ++ti) {
      MultiplierSample s = base;
      s.signs = triples[ti];
      MultiplierSample sw{base.eta, base.xi, {s.signs.mu2, s.signs.mu1, s.signs.mu}};
      for (int j = 1; j <= 3; ++j) {
        const double e = std::abs(m_component(s, j) + std::conj(m_component(sw, j)));
        a.energy_residual[j - 1] = std::max(a.energy_residual[j - 1], e);
      }
      const cplx mt = m_total(s);
      MultiplierSample s2{{2 * s.xi[0], 2 * s.xi[1], 2 * s.xi[2]}, {2 * s.eta[0], 2 * s.eta[1], 2 * s.eta[2]}, s.signs};
      if (std::abs(mt) > 1e-8) a.homogeneity = std::max(a.homogeneity, std::abs(m_total(s2) - 2.0 * mt) / std::abs(mt));
      a.plan_gap = std::max(a.plan_gap, std::abs(eval_plan(plans[ti], s.xi, s.eta) - mt));
      if (s.signs.mu1 == s.signs.mu2) {
        MultiplierSample alt = s;
        alt.eta = sub(s.xi, s.eta);
        for (int j = 1; j <= 2; ++j)
          a.sym_factored_gap = std::max(a.sym_factored_gap, std::abs(m_sym(s, j) - m_sym_factored(s, j)));
      }
    }
  }
  // Equal horizontal moduli |eta_h| = |(xi - eta)_h|: eta_h on the bisector.
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.1, 4.0);
  for (std::size_t n = 0; n < resonant_samples; ++n) {
    Vec3 xi{u(rng), u(rng), u(rng)};
    if (normh(xi) < 1e-3) continue;
    const double sc = u(rng);
    Vec3 eta{0.5 * xi[0] - sc * xi[1], 0.5 * xi[1] + sc * xi[0], u(rng)};
    // Resonant set: horizontal frequencies with |eta_h| = |(xi - eta)_h|.
    const double r = rad(rng), a1 = ang(rng), a2 = ang(rng);
    const Vec3 eh{r * std::cos(a1), r * std::sin(a1), 0.0};
    const Vec3 dh{r * std::cos(a2), r * std::sin(a2), 0.0};
    const Vec3 xr{eh[0] + dh[0], eh[1] + dh[1], 0.0};
    for (int mu : {1, -1})
      for (int m1s : {1, -1}) {
        const SignTriple st{mu, m1s, m1s};
        for (int j = 1; j <= 2; ++j) {
          a.sym_on_equal_moduli = std::max(a.sym_on_equal_moduli, std::abs(m_sym({xi, eta, st}, j)));
          if (normh(xr) > 1e-3) a.sym_on_resonant_set = std::max(a.sym_on_resonant_set, std::abs(m_sym({xr, eh, st}, j)));
        }
      }
  }
  return a;
}

}  // namespace ec
