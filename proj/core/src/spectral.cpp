#include "ec/spectral.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "detail.hpp"

namespace ec {

namespace {

constexpr double kPi = std::numbers::pi;

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans are built once per size with FFTW_ESTIMATE so that the chosen
// algorithm, and with it the rounding, does not depend on timing.
const Plans& plans_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::array<int, 3>, Plans> cache;
  const std::array<int, 3> n{g.n(0), g.n(1), g.n(2)};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  CArray scratch(g.size());
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  Plans pl;
  pl.fwd = fftw_plan_dft_3d(n[0], n[1], n[2], p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  pl.bwd = fftw_plan_dft_3d(n[0], n[1], n[2], p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, pl).first->second;
}

// The centered box shifts x by pi L: a sign (-1)^(i1+i2+i3) on each mode.
void shift_scale(const Grid& g, cplx* d, double w) {
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n(0); ++i1)
    for (int i2 = 0; i2 < g.n(1); ++i2)
      for (int i3 = 0; i3 < g.n(2); ++i3, ++idx) d[idx] *= ((i1 + i2 + i3) & 1) ? -w : w;
}

void check_divfree(const VectorField& u, const char* what) {
  if (divergence_residual(u) > 1e-10)
    throw std::invalid_argument(std::string(what) + ": input is not divergence-free");
}

}  // namespace

namespace detail {
void check_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}
}  // namespace detail

Grid::Grid(int n_per_axis, double box_half_period)
    : Grid({n_per_axis, n_per_axis, n_per_axis}, {box_half_period, box_half_period, box_half_period}) {}

Grid::Grid(std::array<int, 3> n, std::array<double, 3> L) : n_(n), L_(L) {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 8 || n_[a] % 2 != 0) throw std::invalid_argument("n_per_axis must be even and >= 8");
    if (!(L_[a] > 0.0)) throw std::invalid_argument("box_half_period must be positive");
  }
}

namespace {
void require_cubic(const Grid& g, const char* what) {
  if (!g.cubic()) throw std::logic_error(std::string(what) + ": grid is not cubic");
}
}  // namespace

int Grid::n() const {
  require_cubic(*this, "Grid::n");
  return n_[0];
}

double Grid::L() const {
  require_cubic(*this, "Grid::L");
  return L_[0];
}

double Grid::dx() const {
  require_cubic(*this, "Grid::dx");
  return dx(0);
}

double Grid::dx(int axis) const { return 2.0 * kPi * L_[axis] / n_[axis]; }

double Grid::x(int axis, int j) const { return -kPi * L_[axis] + j * dx(axis); }

double Grid::box_volume() const { return std::pow(2.0 * kPi, 3) * L_[0] * L_[1] * L_[2]; }

double Grid::cell_volume() const { return dx(0) * dx(1) * dx(2); }

double Grid::kmax() const {
  double m = (n_[0] / 2) / L_[0];
  for (int a = 1; a < 3; ++a) m = std::min(m, (n_[a] / 2) / L_[a]);
  return m;
}

std::array<int, 3> Grid::lattice(std::size_t idx) const {
  const int i3 = int(idx % n_[2]);
  const int i2 = int((idx / n_[2]) % n_[1]);
  const int i1 = int(idx / (std::size_t(n_[1]) * n_[2]));
  return {freq(0, i1), freq(1, i2), freq(2, i3)};
}

Vec3 Grid::wavevector(std::size_t idx) const {
  const auto k = lattice(idx);
  return {k[0] / L_[0], k[1] / L_[1], k[2] / L_[2]};
}

Vec3 Grid::position(std::size_t idx) const {
  const int i3 = int(idx % n_[2]);
  const int i2 = int((idx / n_[2]) % n_[1]);
  const int i1 = int(idx / (std::size_t(n_[1]) * n_[2]));
  return {x(0, i1), x(1, i2), x(2, i3)};
}

SpectralField::SpectralField(const Grid& g) : grid_(g), c_(g.size(), cplx(0.0)) {}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  detail::check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  detail::check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

void SpectralField::axpy(cplx a, const SpectralField& x) {
  detail::check_same_grid(grid_, x.grid_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * x.c_[i];
}

void SpectralField::set_zero() { std::fill(c_.begin(), c_.end(), cplx(0.0)); }

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] += o.c[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

VectorField& VectorField::operator*=(cplx s) {
  for (auto& f : c) f *= s;
  return *this;
}

void VectorField::axpy(cplx a, const VectorField& x) {
  for (int i = 0; i < 3; ++i) c[i].axpy(a, x.c[i]);
  divergence_free = divergence_free && x.divergence_free;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(cplx s, VectorField a) { return a *= s; }

SpectralField transform(const Grid& g, const CArray& phys) {
  if (phys.size() != g.size())
    throw std::invalid_argument("transform: dimension mismatch (" + std::to_string(phys.size()) +
                                " samples for " + std::to_string(g.size()) + " lattice points)");
  SpectralField f(g);
  std::copy(phys.begin(), phys.end(), f.data());
  auto* p = reinterpret_cast<fftw_complex*>(f.data());
  fftw_execute_dft(plans_for(g).fwd, p, p);
  shift_scale(g, f.data(), g.cell_volume());
  return f;
}

SpectralField transform(const Grid& g, const RArray& phys) {
  if (phys.size() != g.size())
    throw std::invalid_argument("transform: dimension mismatch (" + std::to_string(phys.size()) +
                                " samples for " + std::to_string(g.size()) + " lattice points)");
  CArray c(phys.begin(), phys.end());
  return transform(g, c);
}

CArray inverse_transform(const SpectralField& f) {
  const Grid& g = f.grid();
  CArray out(f.data(), f.data() + f.size());
  shift_scale(g, out.data(), 1.0 / g.box_volume());
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_for(g).bwd, p, p);
  return out;
}

RArray inverse_transform_real(const SpectralField& f) {
  CArray c = inverse_transform(f);
  RArray r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

VectorField gradient(const SpectralField& f) {
  VectorField out(f.grid());
  const cplx* d = f.data();
  detail::for_modes(f.grid(), [&](std::size_t i, double a, double b, double c) {
    const cplx iv = cplx(0.0, 1.0) * d[i];
    out[0][i] = a * iv;
    out[1][i] = b * iv;
    out[2][i] = c * iv;
  });
  return out;
}

SpectralField divergence(const VectorField& u) {
  SpectralField out(u.grid());
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    out[i] = cplx(0.0, 1.0) * (a * u[0][i] + b * u[1][i] + c * u[2][i]);
  });
  return out;
}

VectorField curl(const VectorField& u) {
  VectorField out(u.grid(), true);
  const cplx I(0.0, 1.0);
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    const cplx u1 = u[0][i], u2 = u[1][i], u3 = u[2][i];
    out[0][i] = I * (b * u3 - c * u2);
    out[1][i] = I * (c * u1 - a * u3);
    out[2][i] = I * (a * u2 - b * u1);
  });
  return out;
}

bool zero_mode_clear(const SpectralField& f) {
  const double m = max_abs(f);
  return std::abs(f[0]) <= 1e-13 * m || m == 0.0;
}

SpectralField differential(const SpectralField& f, DiffKind kind) {
  SpectralField out = f;
  switch (kind) {
    case DiffKind::modulus:
      detail::apply_symbol(out, [](double a, double b, double c) { return detail::modulus(a, b, c); });
      return out;
    case DiffKind::inv_modulus:
    case DiffKind::inv_laplacian:
    case DiffKind::d3_inv_laplacian:
      break;
    default:
      throw std::invalid_argument("differential: kind needs a vector field or returns one");
  }
  if (!zero_mode_clear(f)) throw std::invalid_argument("differential: inverse operator applied to nonzero mean");
  detail::for_modes(f.grid(), [&](std::size_t i, double a, double b, double c) {
    const double k2 = a * a + b * b + c * c;
    if (k2 == 0.0) {
      out[i] = 0.0;
      return;
    }
    if (kind == DiffKind::inv_modulus)
      out[i] /= std::sqrt(k2);
    else if (kind == DiffKind::inv_laplacian)
      out[i] *= -1.0 / k2;
    else
      out[i] *= cplx(0.0, -c / k2);
  });
  return out;
}

VectorField differential(const VectorField& u, DiffKind kind) {
  if (kind == DiffKind::curl) return curl(u);
  if (kind == DiffKind::gradient || kind == DiffKind::divergence)
    throw std::invalid_argument("differential: use gradient()/divergence() for rank-changing kinds");
  VectorField out(u.grid(), u.divergence_free);
  for (int j = 0; j < 3; ++j) out[j] = differential(u[j], kind);
  return out;
}

VectorField leray_project(const VectorField& u) {
  VectorField out(u.grid(), true);
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    const double k2 = a * a + b * b + c * c;
    if (k2 == 0.0) {
      out[0][i] = out[1][i] = out[2][i] = 0.0;
      return;
    }
    const cplx d = (a * u[0][i] + b * u[1][i] + c * u[2][i]) / k2;
    out[0][i] = u[0][i] - a * d;
    out[1][i] = u[1][i] - b * d;
    out[2][i] = u[2][i] - c * d;
  });
  return out;
}

VectorField cross_e3(const VectorField& u) {
  VectorField out(u.grid());
  for (std::size_t i = 0; i < u[0].size(); ++i) {
    out[0][i] = -u[1][i];
    out[1][i] = u[0][i];
    out[2][i] = 0.0;
  }
  return out;
}

VectorField helical_project(const VectorField& u, int sign) {
  VectorField out(u.grid(), u.divergence_free);
  const cplx I(0.0, 1.0);
  const double s = sign > 0 ? 1.0 : -1.0;
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    const double k = detail::modulus(a, b, c);
    if (k == 0.0) {
      out[0][i] = out[1][i] = out[2][i] = 0.0;
      return;
    }
    const cplx u1 = u[0][i], u2 = u[1][i], u3 = u[2][i];
    const double w = s / k;
    out[0][i] = 0.5 * (u1 + w * I * (b * u3 - c * u2));
    out[1][i] = 0.5 * (u2 + w * I * (c * u1 - a * u3));
    out[2][i] = 0.5 * (u3 + w * I * (a * u2 - b * u1));
  });
  return out;
}

std::pair<VectorField, VectorField> helical_split(const VectorField& u) {
  check_divfree(u, "helical_split");
  auto p = helical_project(u, +1);
  auto m = helical_project(u, -1);
  p.divergence_free = m.divergence_free = true;
  return {std::move(p), std::move(m)};
}

VectorField helical_recompose(const VectorField& plus, const VectorField& minus) { return plus + minus; }

double dispersion(const Vec3& xi) {
  const double k = detail::modulus(xi[0], xi[1], xi[2]);
  if (k == 0.0) throw std::domain_error("dispersion: zero frequency");
  return xi[2] / k;
}

void semigroup_inplace(SpectralField& f, double t, int sign) {
  const double s = sign > 0 ? t : -t;
  detail::apply_symbol(f, [s](double a, double b, double c) {
    const double k = detail::modulus(a, b, c);
    if (k == 0.0) return cplx(1.0);
    return std::polar(1.0, s * c / k);
  });
}

SpectralField semigroup(const SpectralField& f, double t, int sign) {
  SpectralField out = f;
  semigroup_inplace(out, t, sign);
  return out;
}

VectorField semigroup(const VectorField& u, double t, int sign) {
  VectorField out = u;
  for (auto& c : out.c) semigroup_inplace(c, t, sign);
  return out;
}

bool retained(const Grid& g, int k1, int k2, int k3) {
  return 3 * std::abs(k1) <= g.n(0) && 3 * std::abs(k2) <= g.n(1) && 3 * std::abs(k3) <= g.n(2);
}

void dealias_inplace(SpectralField& f) {
  const Grid& g = f.grid();
  std::array<std::vector<char>, 3> keep;
  for (int a = 0; a < 3; ++a) {
    keep[a].resize(g.n(a));
    for (int i = 0; i < g.n(a); ++i) keep[a][i] = 3 * std::abs(g.freq(a, i)) <= g.n(a);
  }
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n(0); ++i1)
    for (int i2 = 0; i2 < g.n(1); ++i2)
      for (int i3 = 0; i3 < g.n(2); ++i3, ++idx)
        if (!(keep[0][i1] && keep[1][i2] && keep[2][i3])) f[idx] = 0.0;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_inplace(out);
  return out;
}

VectorField dealias(const VectorField& u) {
  VectorField out = u;
  for (auto& c : out.c) dealias_inplace(c);
  return out;
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  return std::sqrt(s / f.grid().box_volume());
}

double l2_norm(const VectorField& u) {
  double s = 0.0;
  for (const auto& c : u.c)
    for (std::size_t i = 0; i < c.size(); ++i) s += std::norm(c[i]);
  return std::sqrt(s / u.grid().box_volume());
}

cplx inner(const SpectralField& a, const SpectralField& b) {
  detail::check_same_grid(a.grid(), b.grid());
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s / a.grid().box_volume();
}

double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

double divergence_residual(const VectorField& u) {
  double num = 0.0, den = 0.0;
  detail::for_modes(u.grid(), [&](std::size_t i, double a, double b, double c) {
    const cplx d = a * u[0][i] + b * u[1][i] + c * u[2][i];
    const double m = std::sqrt(std::norm(u[0][i]) + std::norm(u[1][i]) + std::norm(u[2][i]));
    num = std::max(num, std::abs(d));
    den = std::max(den, detail::modulus(a, b, c) * m);
  });
  return den == 0.0 ? 0.0 : num / den;
}

double hermitian_residual(const SpectralField& f) {
  const Grid& g = f.grid();
  double num = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto k = g.lattice(idx);
    if (2 * k[0] == -g.n(0) || 2 * k[1] == -g.n(1) || 2 * k[2] == -g.n(2)) continue;
    num = std::max(num, std::abs(f.at(-k[0], -k[1], -k[2]) - std::conj(f[idx])));
  }
  const double m = max_abs(f);
  return m == 0.0 ? 0.0 : num / m;
}

namespace {
constexpr char kMagic[8] = {'E', 'C', 'S', 'N', 'A', 'P', '0', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated header");
  return v;
}
}  // namespace

void write_snapshot(const std::string& path, const std::vector<const SpectralField*>& fields,
                    const std::string& kind, double time) {
  static_assert(std::endian::native == std::endian::little, "snapshot writer assumes little-endian host");
  if (fields.empty()) throw std::invalid_argument("snapshot: no fields");
  const Grid& g = fields.front()->grid();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  os.write(kMagic, 8);
  put<std::int32_t>(os, g.n());
  put<double>(os, g.L());
  put<std::int32_t>(os, std::int32_t(kind.size()));
  os.write(kind.data(), std::streamsize(kind.size()));
  put<double>(os, time);
  put<std::int32_t>(os, std::int32_t(fields.size()));
  const int h = g.n() / 2;
  std::vector<float> row(2 * g.n());
  for (const auto* f : fields) {
    detail::check_same_grid(g, f->grid());
    for (int k1 = -h; k1 < h; ++k1)
      for (int k2 = -h; k2 < h; ++k2) {
        for (int k3 = -h; k3 < h; ++k3) {
          const cplx v = f->at(k1, k2, k3);
          row[2 * (k3 + h)] = float(v.real());
          row[2 * (k3 + h) + 1] = float(v.imag());
        }
        os.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
      }
  }
  if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

std::vector<SpectralField> read_snapshot(const std::string& path, SnapshotHeader* header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("snapshot: bad magic");
  SnapshotHeader hd;
  hd.n = get<std::int32_t>(is);
  hd.L = get<double>(is);
  const auto len = get<std::int32_t>(is);
  hd.kind.resize(std::size_t(len));
  is.read(hd.kind.data(), len);
  hd.time = get<double>(is);
  hd.components = get<std::int32_t>(is);
  const Grid g(hd.n, hd.L);
  const int h = g.n() / 2;
  std::vector<SpectralField> out;
  std::vector<float> row(2 * g.n());
  for (int c = 0; c < hd.components; ++c) {
    SpectralField f(g);
    for (int k1 = -h; k1 < h; ++k1)
      for (int k2 = -h; k2 < h; ++k2) {
        is.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
        if (!is) throw std::runtime_error("snapshot: truncated data");
        for (int k3 = -h; k3 < h; ++k3) f.at(k1, k2, k3) = cplx(row[2 * (k3 + h)], row[2 * (k3 + h) + 1]);
      }
    out.push_back(std::move(f));
  }
  if (header) *header = hd;
  return out;
}

}  // namespace ec
