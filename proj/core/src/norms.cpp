#include "ec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail.hpp"
#include "ec/localization.hpp"

namespace ec {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

SpectralField partial(const SpectralField& f, int axis) {
  SpectralField out = f;
  detail::apply_symbol(out, [axis](double a, double b, double c) {
    const double xs[3] = {a, b, c};
    return I * xs[axis];
  });
  return out;
}

double sobolev(const SpectralField& f, int n) {
  double s = 0.0;
  detail::for_modes(f.grid(), [&](std::size_t i, double a, double b, double c) {
    s += std::pow(1.0 + a * a + b * b + c * c, n) * std::norm(f[i]);
  });
  return std::sqrt(s / std::pow(2.0 * kPi * f.grid().L(), 3));
}

// |phys|^2 dx^3 per x3 plane.
std::vector<double> plane_mass(const Grid& g, const CArray& phys) {
  const int n = g.n();
  std::vector<double> m(n, 0.0);
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) m[c] += std::norm(phys[idx]);
  const double v = std::pow(g.dx(), 3);
  for (auto& x : m) x *= v;
  return m;
}

// |phys|^2 dx^3 per (x1, x2) column.
std::vector<double> column_mass(const Grid& g, const CArray& phys) {
  const int n = g.n();
  std::vector<double> m(std::size_t(n) * n, 0.0);
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) m[std::size_t(a) * n + b] += std::norm(phys[idx]);
  const double v = std::pow(g.dx(), 3);
  for (auto& x : m) x *= v;
  return m;
}

bool needs_coordinates(NormKind k) {
  return k == NormKind::S_Omega_energy || k == NormKind::X || k == NormKind::Y || k == NormKind::weighted;
}

NormValue xy_norm(const SpectralField& f, const NormSpec& spec, bool horizontal) {
  const Grid& g = f.grid();
  const int n = g.n();
  NormValue best;
  const int lmax = int(std::floor(std::log2(kPi * g.L())));
  for (int k : admissible_k(g, horizontal)) {
    Selector sel;
    sel.family = horizontal ? Family::h : Family::v;
    sel.k = k;
    SpectralField pk = project(f, sel).field;
    std::vector<SpectralField> omegas{pk};
    for (int b = 1; b <= spec.n2; ++b) omegas.push_back(apply_Omega(omegas.back()));
    for (int b = 0; b <= spec.n2; ++b) {
      SpectralField v = omegas[b];
      for (int a = 0; a + b <= spec.n2; ++a) {
        if (a > 0) v = apply_S(v);
        const CArray phys = inverse_transform(v);
        std::vector<double> mass = horizontal ? plane_mass(g, phys) : column_mass(g, phys);
        for (int l = -k; l <= lmax; ++l) {
          SpatialSelector z{horizontal ? SpatialKind::Z_mod : SpatialKind::H_mod, l, k};
          double s = 0.0;
          if (horizontal) {
            for (int c = 0; c < n; ++c) {
              const double w = z.weight({0.0, 0.0, g.x(c)});
              s += w * w * mass[c];
            }
          } else {
            for (int a1 = 0; a1 < n; ++a1)
              for (int b1 = 0; b1 < n; ++b1) {
                const double w = z.weight({g.x(a1), g.x(b1), 0.0});
                s += w * w * mass[std::size_t(a1) * n + b1];
              }
          }
          const double val =
              std::pow(2.0, spec.n1 * std::max(k, 0) + (1.0 + spec.beta) * (l + k)) * std::sqrt(s);
          if (val > best.value) best = {val, true, k, l, a, b};
        }
      }
    }
  }
  return best;
}

double weighted_l2(const SpectralField& f, double beta) {
  return l2_norm(multiply_physical(f, [beta](const Vec3& x) {
    return std::pow(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 0.5 * (1.0 + beta));
  }));
}

double s_omega_energy(const SpectralField& f, const NormSpec& spec) {
  double total = 0.0;
  SpectralField ob = f;
  for (int b = 0; b <= spec.n2; ++b) {
    if (b > 0) ob = apply_Omega(ob);
    SpectralField v = ob;
    for (int a = 0; a + b <= spec.n2; ++a) {
      if (a > 0) v = apply_S(v);
      total += sobolev(v, spec.n);
    }
  }
  return total;
}

double s_omega_energy(const VectorField& u, const NormSpec& spec) {
  double total = 0.0;
  VectorField ob = u;
  for (int b = 0; b <= spec.n2; ++b) {
    if (b > 0) ob = apply_Omega_bar(ob);
    VectorField v = ob;
    for (int a = 0; a + b <= spec.n2; ++a) {
      if (a > 0) v = apply_S(v);
      double s = 0.0;
      for (const auto& c : v.c) s += std::pow(sobolev(c, spec.n), 2);
      total += std::sqrt(s);
    }
  }
  return total;
}

}  // namespace

SpectralField apply_S(const SpectralField& f) {
  SpectralField out(f.grid());
  for (int i = 0; i < 3; ++i) out += multiply_physical(partial(f, i), [i](const Vec3& x) { return x[i]; });
  return out;
}

SpectralField apply_Omega(const SpectralField& f) {
  SpectralField out = multiply_physical(partial(f, 0), [](const Vec3& x) { return -x[1]; });
  out += multiply_physical(partial(f, 1), [](const Vec3& x) { return x[0]; });
  return out;
}

VectorField apply_S(const VectorField& u) {
  VectorField out(u.grid());
  for (int i = 0; i < 3; ++i) out[i] = apply_S(u[i]);
  return out;
}

VectorField apply_Omega_bar(const VectorField& u) {
  VectorField out(u.grid());
  for (int i = 0; i < 3; ++i) out[i] = apply_Omega(u[i]);
  out[0] += u[1];
  out[1] -= u[0];
  return out;
}

double interior_mass_fraction(const SpectralField& f, double inner) {
  const Grid& g = f.grid();
  const CArray phys = inverse_transform(f);
  const int n = g.n();
  const double lim = inner * kPi * g.L();
  double in = 0.0, all = 0.0;
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) {
        const double m = std::norm(phys[idx]);
        all += m;
        if (std::fabs(g.x(a)) < lim && std::fabs(g.x(b)) < lim && std::fabs(g.x(c)) < lim) in += m;
      }
  return all == 0.0 ? 1.0 : in / all;
}

double interior_mass_fraction(const VectorField& u, double inner) {
  double in = 0.0, all = 0.0;
  for (const auto& c : u.c) {
    const double m = std::pow(l2_norm(c), 2);
    in += interior_mass_fraction(c, inner) * m;
    all += m;
  }
  return all == 0.0 ? 1.0 : in / all;
}

std::vector<int> admissible_k(const Grid& g, bool horizontal, int min_modes) {
  std::vector<int> out;
  const int lo = int(std::floor(std::log2(1.0 / g.L()))) - 1;
  const int hi = int(std::ceil(std::log2(g.kmax())));
  for (int k = lo; k <= hi; ++k) {
    if (!ring_resolvable(g, k)) continue;
    Selector sel;
    sel.family = horizontal ? Family::h : Family::v;
    sel.k = k;
    int count = 0;
    detail::for_modes(g, [&](std::size_t, double a, double b, double c) {
      if (count < min_modes && sel.symbol({a, b, c}) > 0.0) ++count;
    });
    if (count >= min_modes) out.push_back(k);
  }
  return out;
}

NormValue norm(const SpectralField& f, const NormSpec& spec) {
  if (spec.beta < 0.0 || spec.n1 < 0 || spec.n2 < 0) throw std::invalid_argument("norm: negative parameter");
  NormValue out;
  switch (spec.kind) {
    case NormKind::Hn:
      out.value = sobolev(f, spec.n);
      break;
    case NormKind::S_Omega_energy:
      out.value = s_omega_energy(f, spec);
      break;
    case NormKind::X:
      out = xy_norm(f, spec, true);
      break;
    case NormKind::Y:
      out = xy_norm(f, spec, false);
      break;
    case NormKind::weighted:
      out.value = weighted_l2(f, spec.beta);
      break;
    case NormKind::sup:
      out.value = sup_norm(f);
      break;
  }
  if (needs_coordinates(spec.kind)) out.reliable = interior_mass_fraction(f) >= 1.0 - 1e-8;
  return out;
}

NormValue norm(const VectorField& u, const NormSpec& spec) {
  NormValue out;
  switch (spec.kind) {
    case NormKind::Hn:
    case NormKind::weighted: {
      double s = 0.0;
      for (const auto& c : u.c) s += std::pow(norm(c, spec).value, 2);
      out.value = std::sqrt(s);
      break;
    }
    case NormKind::S_Omega_energy:
      out.value = s_omega_energy(u, spec);
      break;
    case NormKind::X:
    case NormKind::Y: {
      double best = -1.0;
      for (const auto& c : u.c) {
        const NormValue v = norm(c, spec);
        out.value += v.value;
        if (v.value > best) {
          best = v.value;
          out.k = v.k, out.l = v.l, out.a = v.a, out.b = v.b;
        }
      }
      break;
    }
    case NormKind::sup:
      out.value = sup_norm(u);
      break;
  }
  if (needs_coordinates(spec.kind)) out.reliable = interior_mass_fraction(u) >= 1.0 - 1e-8;
  return out;
}

LinfControl linf_control_check(const SpectralField& f, const std::vector<int>& ks) {
  LinfControl out;
  out.k = ks.empty() ? admissible_k(f.grid(), true) : ks;
  const double x = norm(f, {NormKind::X, 0, 0, 2, 0.0}).value;
  for (int k : out.k) {
    double m = 0.0;
    detail::for_modes(f.grid(), [&](std::size_t i, double a, double b, double c) {
      const double r = std::sqrt(a * a + b * b + c * c);
      if (r == 0.0) return;
      const double w = cutoff::chi_h(c / r) * cutoff::phi(std::ldexp(std::hypot(a, b), -k));
      m = std::max(m, w * std::abs(f[i]));
    });
    const double ratio = x == 0.0 ? 0.0 : std::pow(2.0, 1.5 * k) * m / x;
    out.ratio.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  return out;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1,
                   double recurrence_time) {
  if (t.size() != v.size()) throw std::invalid_argument("decay_fit: size mismatch");
  if (t1 > recurrence_time / 2.0 * (1.0 + 1e-12))
    throw std::invalid_argument("decay_fit: window extends past half the recurrence time");
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t0 && t[i] <= t1 && t[i] > 0.0 && v[i] > 0.0) {
      X.push_back(std::log(t[i]));
      Y.push_back(std::log(v[i]));
    }
  if (X.size() < 8) throw std::invalid_argument("decay_fit: fewer than 8 samples in the window");
  const double n = double(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) mx += X[i], my += Y[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  DecayFit fit;
  fit.t0 = t0, fit.t1 = t1, fit.recurrence_time = recurrence_time, fit.samples = X.size();
  fit.exponent = sxx == 0.0 ? 0.0 : sxy / sxx;
  const double b = my - fit.exponent * mx;
  fit.constant = std::exp(b);
  double r = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) r += std::pow(Y[i] - (b + fit.exponent * X[i]), 2);
  fit.residual = std::sqrt(r / n);
  return fit;
}

double sup_norm(const SpectralField& f) {
  const CArray p = inverse_transform(f);
  double m = 0.0;
  for (const auto& v : p) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const VectorField& u) {
  std::vector<double> s(u.grid().size(), 0.0);
  for (const auto& c : u.c) {
    const CArray p = inverse_transform(c);
    for (std::size_t i = 0; i < p.size(); ++i) s[i] += std::norm(p[i]);
  }
  return std::sqrt(*std::max_element(s.begin(), s.end()));
}

double grad_sup(const VectorField& u) {
  std::vector<double> s(u.grid().size(), 0.0);
  for (const auto& c : u.c)
    for (int j = 0; j < 3; ++j) {
      const CArray p = inverse_transform(partial(c, j));
      for (std::size_t i = 0; i < p.size(); ++i) s[i] += std::norm(p[i]);
    }
  return std::sqrt(*std::max_element(s.begin(), s.end()));
}

double profile_distance(const VectorProfile& a, const VectorProfile& b) {
  return std::hypot(l2_norm(a.plus - b.plus), l2_norm(a.minus - b.minus));
}

EnergyMonitor energy_inequality_monitor(const std::vector<Snapshot>& traj, int n, double beta) {
  EnergyMonitor out;
  if (traj.size() < 3) return out;
  std::vector<double> eh, es, ew, gs;
  for (const auto& s : traj) {
    eh.push_back(std::pow(norm(s.u, {NormKind::Hn, n}).value, 2));
    es.push_back(std::pow(norm(s.u, {NormKind::S_Omega_energy, 0, 0, 1}).value, 2));
    ew.push_back(std::pow(norm(s.u, {NormKind::weighted, 0, 0, 0, beta}).value, 2));
    gs.push_back(grad_sup(s.u));
  }
  auto fit = [&](const std::vector<double>& e, double& c) {
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      const double de = (e[i + 1] - e[i - 1]) / (traj[i + 1].t - traj[i - 1].t);
      if (!std::isfinite(de)) out.finite = false;
      if (e[i] > 0.0) out.max_rate = std::max(out.max_rate, std::fabs(de) / e[i]);
      if (de > 0.0 && gs[i] > 0.0 && e[i] > 0.0) c = std::max(c, de / (gs[i] * e[i]));
    }
  };
  fit(eh, out.c_hn);
  fit(es, out.c_s_omega);
  fit(ew, out.c_weighted);
  out.finite = out.finite && std::isfinite(out.c_hn) && std::isfinite(out.c_s_omega) && std::isfinite(out.c_weighted);
  return out;
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::Hn:
      return "Hn";
    case NormKind::S_Omega_energy:
      return "S_Omega_energy";
    case NormKind::X:
      return "X";
    case NormKind::Y:
      return "Y";
    case NormKind::weighted:
      return "weighted";
    case NormKind::sup:
      return "sup";
  }
  return "?";
}

NormKind norm_kind_from_string(const std::string& s) {
  for (NormKind k : {NormKind::Hn, NormKind::S_Omega_energy, NormKind::X, NormKind::Y, NormKind::weighted, NormKind::sup})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown norm kind: " + s);
}

}  // namespace ec
