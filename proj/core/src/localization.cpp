#include "ec/localization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "detail.hpp"

namespace ec {

namespace cutoff {

namespace {
double sig(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

double step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = sig(s), b = sig(1.0 - s);
  return a / (a + b);
}

double psi(double x) { return step((2.0 - std::fabs(x)) / 0.2); }
double phi(double x) { return psi(x) - psi(2.0 * x); }
double phi_q(double x) { return step((0.6 - std::fabs(x)) / 0.2); }

double chi_h(double lam) { return step((0.6 - std::fabs(lam)) / 0.05); }
double chi_v(double lam) { return 1.0 - chi_h(lam); }
double chi_h_tilde(double lam) { return step((0.62 - std::fabs(lam)) / 0.01); }
double chi_v_tilde(double lam) { return step((std::fabs(lam) - 0.53) / 0.01); }
double chi_h_le_m1(double lam) { return step((0.61 - std::fabs(lam)) / 0.01); }
double chi_v_le_m1(double lam) { return step((std::fabs(lam) - 0.54) / 0.01); }

}  // namespace cutoff

namespace {

using cutoff::phi;
using cutoff::psi;

double sqrt_one_minus(double lam) { return std::sqrt(std::max(0.0, 1.0 - lam * lam)); }

// chi^{h,q}; q = -1 is the special top piece.
double chi_hq(double lam, int q) {
  if (q == -1) return cutoff::chi_h_le_m1(lam) - psi(4.0 * lam);
  return phi(std::ldexp(lam, -q));
}

double chi_h_leq(double lam, int q) {
  if (q >= -1) return cutoff::chi_h_le_m1(lam);
  return psi(std::ldexp(lam, -q));
}

double chi_vp(double lam, int p) {
  const double s = sqrt_one_minus(lam);
  if (p == -1) return cutoff::chi_v_le_m1(lam) - psi(4.0 * s);
  return phi(std::ldexp(s, -p));
}

double chi_v_lep(double lam, int p) {
  if (p >= -1) return cutoff::chi_v_le_m1(lam);
  return psi(std::ldexp(sqrt_one_minus(lam), -p));
}

}  // namespace

double Selector::symbol(const Vec3& xi) const {
  const double rh = std::hypot(xi[0], xi[1]);
  const double r = std::hypot(rh, xi[2]);
  if (r == 0.0) return 0.0;
  const double lam = xi[2] / r;
  switch (family) {
    case Family::all: {
      if (!k) return 1.0;
      return cutoff::chi_h(lam) * phi(std::ldexp(rh, -*k)) + cutoff::chi_v(lam) * phi(std::ldexp(std::fabs(xi[2]), -*k));
    }
    case Family::h: {
      double s;
      if (q)
        s = le ? chi_h_leq(lam, *q) : chi_hq(lam, *q);
      else
        s = tilde ? cutoff::chi_h_tilde(lam) : cutoff::chi_h(lam);
      if (k) s *= phi(std::ldexp(rh, -*k));
      return s;
    }
    case Family::v: {
      double s;
      if (p)
        s = le ? chi_v_lep(lam, *p) : chi_vp(lam, *p);
      else
        s = tilde ? cutoff::chi_v_tilde(lam) : cutoff::chi_v(lam);
      if (k) s *= phi(std::ldexp(std::fabs(xi[2]), -*k));
      return s;
    }
  }
  return 0.0;
}

std::string Selector::describe() const {
  std::ostringstream os;
  os << "P";
  if (family == Family::h) os << ":h";
  if (family == Family::v) os << ":v";
  if (tilde) os << ":tilde";
  if (le) os << ":le";
  if (q) os << ":q=" << *q;
  if (p) os << ":p=" << *p;
  if (k) os << ":k=" << *k;
  return os.str();
}

bool ring_resolvable(const Grid& g, int k, Family family) {
  const int first = family == Family::v ? 2 : 0;
  const int last = family == Family::h ? 1 : 2;
  double kmax = 1e300, L = 0.0;
  for (int a = first; a <= last; ++a) {
    kmax = std::min(kmax, (g.n(a) / 2) / g.L(a));
    L = std::max(L, g.L(a));
  }
  const double outer = std::ldexp(1.0, k + 1);
  if (outer > kmax) return false;
  // Some lattice radius m / L must fall strictly inside the ring.
  const double inner = 0.9 * std::ldexp(1.0, k);
  const double m = std::floor(inner * L) + 1.0;
  return m / L < outer;
}

ProjectResult project(const SpectralField& f, const Selector& sel) {
  ProjectResult out{f, false};
  if (sel.k && !ring_resolvable(f.grid(), *sel.k, sel.family)) {
    out.field.set_zero();
    out.unresolved = true;
    return out;
  }
  detail::apply_symbol(out.field, [&](double a, double b, double c) { return sel.symbol({a, b, c}); });
  return out;
}

VectorField project(const VectorField& u, const Selector& sel, bool* unresolved) {
  VectorField out(u.grid(), u.divergence_free);
  bool bad = false;
  for (int i = 0; i < 3; ++i) {
    auto r = project(u[i], sel);
    bad = bad || r.unresolved;
    out[i] = std::move(r.field);
  }
  if (unresolved) *unresolved = bad;
  return out;
}

double SpatialSelector::weight(const Vec3& x) const {
  const double z = std::fabs(x[2]);
  const double h = std::hypot(x[0], x[1]);
  switch (kind) {
    case SpatialKind::Z:
      return phi(std::ldexp(z, -l));
    case SpatialKind::H:
      return phi(std::ldexp(h, -l));
    case SpatialKind::Z_le:
      return psi(std::ldexp(z, -l));
    case SpatialKind::H_le:
      return psi(std::ldexp(h, -l));
    case SpatialKind::Z_plus:
      return x[2] > 0.0 ? phi(std::ldexp(z, -l)) : 0.0;
    case SpatialKind::Z_minus:
      return x[2] < 0.0 ? phi(std::ldexp(z, -l)) : 0.0;
    case SpatialKind::Z_mod:
    case SpatialKind::H_mod: {
      const double v = kind == SpatialKind::Z_mod ? z : h;
      if (l >= -k + 1) return phi(std::ldexp(v, -l));
      if (l == -k) return psi(std::ldexp(v, k));
      return 0.0;
    }
  }
  return 0.0;
}

SpectralField multiply_physical(const SpectralField& f, const std::function<double(const Vec3&)>& w) {
  const Grid& g = f.grid();
  CArray phys = inverse_transform(f);
  std::array<std::vector<double>, 3> xs;
  for (int a = 0; a < 3; ++a)
    for (int j = 0; j < g.n(a); ++j) xs[a].push_back(g.x(a, j));
  std::size_t idx = 0;
  for (double x1 : xs[0])
    for (double x2 : xs[1])
      for (double x3 : xs[2]) phys[idx++] *= w({x1, x2, x3});
  return transform(g, phys);
}

SpectralField spatial_localize(const SpectralField& f, const SpatialSelector& sel) {
  return multiply_physical(f, [&](const Vec3& x) { return sel.weight(x); });
}

VectorField spatial_localize(const VectorField& u, const SpatialSelector& sel) {
  VectorField out(u.grid());
  for (int i = 0; i < 3; ++i) out[i] = spatial_localize(u[i], sel);
  return out;
}

double ring_symbol(const Vec3& xi, int J, long j) {
  const double rh = std::hypot(xi[0], xi[1]);
  if (rh == 0.0) return 0.0;
  return cutoff::phi_q(std::ldexp(std::log(rh), 2 * J) - double(j));
}

std::pair<long, long> ring_index_range(const Grid& g, int J) {
  const double lo = std::log(1.0 / std::max({g.L(0), g.L(1), g.L(2)}));
  const double hi = std::log(std::sqrt(2.0) * g.kmax());
  return {long(std::ceil(std::ldexp(lo, 2 * J) - 0.6)), long(std::floor(std::ldexp(hi, 2 * J) + 0.6))};
}

RingResult ring_localize(const SpectralField& f, int J, long j) {
  RingResult out{f, false};
  const auto [lo, hi] = ring_index_range(f.grid(), J);
  if (j < lo || j > hi) {
    out.field.set_zero();
    out.unresolved = true;
    return out;
  }
  detail::apply_symbol(out.field, [&](double a, double b, double c) { return ring_symbol({a, b, c}, J, j); });
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

long parse_int(const std::string& key, const std::string& v, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("selector '" + text + "': bad integer for " + key + ": '" + v + "'");
  }
}

}  // namespace

ParsedSelector parse_selector(const std::string& text) {
  const auto tok = split(text, ':');
  if (tok.empty() || tok[0].empty()) throw std::invalid_argument("selector: empty");
  ParsedSelector ps;
  const std::string head = tok[0];
  std::map<std::string, long> kv;
  std::vector<std::string> flags;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string::npos) {
      flags.push_back(tok[i]);
    } else {
      const std::string key = tok[i].substr(0, eq);
      if (kv.count(key)) throw std::invalid_argument("selector '" + text + "': repeated key " + key);
      kv[key] = parse_int(key, tok[i].substr(eq + 1), text);
    }
  }
  auto unknown = [&](const std::string& what) {
    throw std::invalid_argument("selector '" + text + "': unexpected " + what);
  };
  if (head == "P" || head == "Pk") {
    ps.kind = ParsedSelector::Kind::fourier;
    auto& s = ps.fourier;
    for (const auto& f : flags) {
      if (f == "h")
        s.family = Family::h;
      else if (f == "v")
        s.family = Family::v;
      else if (f == "tilde")
        s.tilde = true;
      else if (f == "le")
        s.le = true;
      else
        unknown("flag '" + f + "'");
    }
    for (const auto& [key, v] : kv) {
      if (key == "k")
        s.k = int(v);
      else if (key == "q")
        s.q = int(v);
      else if (key == "p")
        s.p = int(v);
      else
        unknown("key '" + key + "'");
    }
    if (s.q && s.family != Family::h) throw std::invalid_argument("selector '" + text + "': q needs family h");
    if (s.p && s.family != Family::v) throw std::invalid_argument("selector '" + text + "': p needs family v");
    if ((s.q && *s.q > -1) || (s.p && *s.p > -1))
      throw std::invalid_argument("selector '" + text + "': q and p must be <= -1");
    if (s.le && !s.q && !s.p) throw std::invalid_argument("selector '" + text + "': le needs q or p");
    return ps;
  }
  if (head == "Z" || head == "H") {
    ps.kind = ParsedSelector::Kind::spatial;
    auto& s = ps.spatial;
    if (!kv.count("l")) throw std::invalid_argument("selector '" + text + "': missing l");
    s.l = int(kv["l"]);
    const bool z = head == "Z";
    s.kind = z ? SpatialKind::Z : SpatialKind::H;
    if (kv.count("k")) {
      s.k = int(kv["k"]);
      s.kind = z ? SpatialKind::Z_mod : SpatialKind::H_mod;
    }
    for (const auto& [key, v] : kv)
      if (key != "l" && key != "k") unknown("key '" + key + "'");
    for (const auto& f : flags) {
      if (f == "le" && !kv.count("k"))
        s.kind = z ? SpatialKind::Z_le : SpatialKind::H_le;
      else if (z && f == "plus" && !kv.count("k"))
        s.kind = SpatialKind::Z_plus;
      else if (z && f == "minus" && !kv.count("k"))
        s.kind = SpatialKind::Z_minus;
      else
        unknown("flag '" + f + "'");
    }
    return ps;
  }
  if (head == "Q") {
    ps.kind = ParsedSelector::Kind::ring;
    if (!kv.count("J") || !kv.count("j")) throw std::invalid_argument("selector '" + text + "': Q needs J and j");
    for (const auto& [key, v] : kv)
      if (key != "J" && key != "j") unknown("key '" + key + "'");
    if (!flags.empty()) unknown("flag '" + flags[0] + "'");
    ps.J = int(kv["J"]);
    ps.j = kv["j"];
    return ps;
  }
  throw std::invalid_argument("selector '" + text + "': unknown operator '" + head + "'");
}

SpectralField apply_selector(const SpectralField& f, const ParsedSelector& s, bool* unresolved) {
  bool bad = false;
  SpectralField out;
  switch (s.kind) {
    case ParsedSelector::Kind::fourier: {
      auto r = project(f, s.fourier);
      bad = r.unresolved;
      out = std::move(r.field);
      break;
    }
    case ParsedSelector::Kind::spatial:
      out = spatial_localize(f, s.spatial);
      break;
    case ParsedSelector::Kind::ring: {
      auto r = ring_localize(f, s.J, s.j);
      bad = r.unresolved;
      out = std::move(r.field);
      break;
    }
  }
  if (unresolved) *unresolved = bad;
  return out;
}

bool WavePacketGeometry::admissible() const {
  const int jmax = int(std::floor(m * gamma / 2.0));
  return J >= 5 && J <= jmax && std::labs(j) <= 10L * (1L << (2 * J));
}

double WavePacketGeometry::rho1() const { return std::exp(std::ldexp(double(j) - 0.7, -2 * J)); }
double WavePacketGeometry::rho2() const { return std::exp(std::ldexp(double(j) + 0.7, -2 * J)); }

Membership wavepacket_sets(const WavePacketGeometry& geo, const Vec3& x, double t) {
  if (!(t >= std::ldexp(1.0, geo.m) && t < std::ldexp(1.0, geo.m + 1)))
    throw std::invalid_argument("wavepacket_sets: t outside [2^m, 2^{m+1})");
  Membership mb;
  const double xh = std::hypot(x[0], x[1]);
  const double z = -x[2];
  if (!(xh < geo.C1 * std::pow(t, 1.0 - geo.alpha) && z > t / geo.C2 && z < geo.C2 * t)) return mb;
  mb.in_cylinder = true;
  const double a = t / geo.rho1(), b = t / geo.rho2();
  if (z > b && z < a) {
    mb.level = 0;
    return mb;
  }
  mb.distance = std::ldexp(std::min(std::fabs(x[2] + a), std::fabs(x[2] + b)), 2 * geo.J - geo.m);
  if (mb.distance < 4.0)
    mb.level = 1;
  else
    mb.level = int(std::floor(std::log2(mb.distance)));
  // Guard the floor against rounding at exact powers of two.
  while (std::ldexp(1.0, mb.level) > mb.distance) --mb.level;
  while (std::ldexp(1.0, mb.level + 1) <= mb.distance) ++mb.level;
  if (mb.distance < 4.0) mb.level = 1;
  return mb;
}

namespace {

// Nonzero pieces Q^J_j f keyed by j.
std::map<long, SpectralField> ring_pieces(const SpectralField& f, int J) {
  std::map<long, SpectralField> out;
  const Grid& g = f.grid();
  detail::for_modes(g, [&](std::size_t idx, double a, double b, double) {
    if (f[idx] == cplx(0.0)) return;
    const double rh = std::hypot(a, b);
    if (rh == 0.0) return;
    const double y = std::ldexp(std::log(rh), 2 * J);
    for (long j = long(std::floor(y - 0.6)); j <= long(std::ceil(y + 0.6)); ++j) {
      const double w = cutoff::phi_q(y - double(j));
      if (w == 0.0) continue;
      auto it = out.find(j);
      if (it == out.end()) it = out.emplace(j, SpectralField(g)).first;
      it->second[idx] = w * f[idx];
    }
  });
  return out;
}

}  // namespace

std::vector<TelescopePiece> telescope(const Bilinear& bilinear, const SpectralField& g1, const SpectralField& g2,
                                      int J0, int Jmax) {
  if (Jmax < J0) throw std::invalid_argument("telescope: Jmax < J0");
  if (!(g1.grid() == g2.grid())) throw std::invalid_argument("telescope: grid mismatch");
  std::vector<TelescopePiece> pieces;
  auto r1 = ring_pieces(g1, J0);
  auto r2 = ring_pieces(g2, J0);
  for (const auto& [j1, f1] : r1)
    for (const auto& [j2, f2] : r2)
      if (std::labs(j1 - j2) > 1) pieces.push_back({1, J0, j1, j2, 0, 0, bilinear(f1, f2)});
  for (int J = J0 + 1; J <= Jmax; ++J) {
    for (const auto& [p1, f1] : r1)
      for (const auto& [p2, f2] : r2) {
        if (std::labs(p1 - p2) > 1) continue;
        const auto c1 = ring_pieces(f1, J);
        const auto c2 = ring_pieces(f2, J);
        for (const auto& [j1, h1] : c1)
          for (const auto& [j2, h2] : c2)
            if (std::labs(j1 - j2) > 1) pieces.push_back({2, J, j1, j2, p1, p2, bilinear(h1, h2)});
      }
    r1 = ring_pieces(g1, J);
    r2 = ring_pieces(g2, J);
  }
  for (const auto& [j1, f1] : r1)
    for (const auto& [j2, f2] : r2)
      if (std::labs(j1 - j2) <= 1) pieces.push_back({3, Jmax, j1, j2, 0, 0, bilinear(f1, f2)});
  return pieces;
}

}  // namespace ec
