// Periodic-box spectral representation on a centered box of side 2*pi*L
// (a cube unless built with per-axis sizes).
//
// Coefficients follow the continuum convention
//   f^(xi) = int f(x) e^{-i xi.x} dx,   f(x) = (2 pi)^-3 int f^(xi) e^{i xi.x} dxi
// discretized on the lattice xi = k / L, k_j in [-n/2, n/2). Storage is in
// FFT order: index i along an axis carries k = i for i < n/2, i - n otherwise.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace ec {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const { return true; }
};

using CArray = std::vector<cplx, FftwAllocator<cplx>>;
using RArray = std::vector<double>;

class Grid {
 public:
  Grid() = default;
  Grid(int n_per_axis, double box_half_period);
  // Box [-pi L_a, pi L_a) with n_a points along axis a.
  Grid(std::array<int, 3> n, std::array<double, 3> L);

  bool cubic() const { return n_[0] == n_[1] && n_[1] == n_[2] && L_[0] == L_[1] && L_[1] == L_[2]; }
  // Single-axis accessors; throw on a non-cubic grid.
  int n() const;
  double L() const;
  double dx() const;
  int freq(int i) const { return freq(0, i); }
  int slot(int k) const { return slot(0, k); }
  double x(int j) const { return x(0, j); }

  int n(int axis) const { return n_[axis]; }
  double L(int axis) const { return L_[axis]; }
  double dx(int axis) const;
  int freq(int axis, int i) const { return i < n_[axis] / 2 ? i : i - n_[axis]; }
  int slot(int axis, int k) const { return k >= 0 ? k : k + n_[axis]; }
  // Physical coordinate x_j = -pi L + j * 2 pi L / n along an axis.
  double x(int axis, int j) const;

  std::size_t size() const { return std::size_t(n_[0]) * n_[1] * n_[2]; }
  // (2 pi)^3 L1 L2 L3 and dx1 dx2 dx3.
  double box_volume() const;
  double cell_volume() const;
  // Largest |xi_j| resolved along every axis.
  double kmax() const;

  std::size_t index(int i1, int i2, int i3) const {
    return (std::size_t(i1) * n_[1] + i2) * n_[2] + i3;
  }
  std::size_t index_of_freq(int k1, int k2, int k3) const {
    return index(slot(0, k1), slot(1, k2), slot(2, k3));
  }
  std::array<int, 3> lattice(std::size_t idx) const;
  Vec3 wavevector(std::size_t idx) const;
  Vec3 position(std::size_t idx) const;

  bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  std::array<int, 3> n_{0, 0, 0};
  std::array<double, 3> L_{0.0, 0.0, 0.0};
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& g);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return c_.size(); }
  cplx* data() { return c_.data(); }
  const cplx* data() const { return c_.data(); }
  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  cplx& at(int k1, int k2, int k3) { return c_[grid_.index_of_freq(k1, k2, k3)]; }
  const cplx& at(int k1, int k2, int k3) const {
    return c_[grid_.index_of_freq(k1, k2, k3)];
  }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx s);
  void axpy(cplx a, const SpectralField& x);
  void set_zero();

 private:
  Grid grid_;
  CArray c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);

struct VectorField {
  std::array<SpectralField, 3> c;
  bool divergence_free = false;

  VectorField() = default;
  explicit VectorField(const Grid& g, bool divfree = false)
      : c{SpectralField(g), SpectralField(g), SpectralField(g)},
        divergence_free(divfree) {}

  const Grid& grid() const { return c[0].grid(); }
  SpectralField& operator[](int i) { return c[i]; }
  const SpectralField& operator[](int i) const { return c[i]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(cplx s);
  void axpy(cplx a, const VectorField& x);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(cplx s, VectorField a);

// Transforms. Physical arrays are stored as i1 (x1) slowest, i3 fastest.
SpectralField transform(const Grid& g, const CArray& phys);
SpectralField transform(const Grid& g, const RArray& phys);
CArray inverse_transform(const SpectralField& f);
RArray inverse_transform_real(const SpectralField& f);

enum class DiffKind {
  gradient,
  divergence,
  curl,
  inv_modulus,
  inv_laplacian,
  d3_inv_laplacian,
  modulus,
};

VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& u);
VectorField curl(const VectorField& u);
SpectralField differential(const SpectralField& f, DiffKind kind);
VectorField differential(const VectorField& u, DiffKind kind);

VectorField leray_project(const VectorField& u);
VectorField cross_e3(const VectorField& u);
std::pair<VectorField, VectorField> helical_split(const VectorField& u);
VectorField helical_recompose(const VectorField& plus, const VectorField& minus);
// P_s u = (u + s |grad|^-1 curl u) / 2, s = +1 or -1, mode-wise and unchecked.
VectorField helical_project(const VectorField& u, int sign);

double dispersion(const Vec3& xi);

SpectralField semigroup(const SpectralField& f, double t, int sign);
VectorField semigroup(const VectorField& u, double t, int sign);
void semigroup_inplace(SpectralField& f, double t, int sign);

SpectralField dealias(const SpectralField& f);
VectorField dealias(const VectorField& u);
void dealias_inplace(SpectralField& f);
bool retained(const Grid& g, int k1, int k2, int k3);

// L2 quantities use the coefficient-side Parseval weight (2 pi L)^-3.
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& u);
cplx inner(const SpectralField& a, const SpectralField& b);
double max_abs(const SpectralField& f);
// max |xi . u^| / max |xi||u^|
double divergence_residual(const VectorField& u);
double hermitian_residual(const SpectralField& f);
bool zero_mode_clear(const SpectralField& f);

// Snapshot format: magic, n, L, kind, time, then complex64 LE in lexicographic
// order k1, k2, k3 from -n/2 upward with k3 fastest.
struct SnapshotHeader {
  int n = 0;
  double L = 0.0;
  std::string kind;
  double time = 0.0;
  int components = 1;
};
void write_snapshot(const std::string& path, const std::vector<const SpectralField*>& fields,
                    const std::string& kind, double time);
std::vector<SpectralField> read_snapshot(const std::string& path, SnapshotHeader* header);

}  // namespace ec
