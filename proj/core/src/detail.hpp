#pragma once

#include <cmath>
#include <vector>

#include "ec/spectral.hpp"

namespace ec::detail {

// Wavenumbers xi = k / L along one axis in storage order.
inline std::vector<double> axis_wavenumbers(const Grid& g, int axis) {
  std::vector<double> w(g.n(axis));
  for (int i = 0; i < g.n(axis); ++i) w[i] = g.freq(axis, i) / g.L(axis);
  return w;
}

// Calls fn(idx, xi1, xi2, xi3) over the lattice in storage order.
template <class Fn>
void for_modes(const Grid& g, Fn&& fn) {
  const auto w1 = axis_wavenumbers(g, 0), w2 = axis_wavenumbers(g, 1), w3 = axis_wavenumbers(g, 2);
  std::size_t idx = 0;
  for (std::size_t i1 = 0; i1 < w1.size(); ++i1)
    for (std::size_t i2 = 0; i2 < w2.size(); ++i2)
      for (std::size_t i3 = 0; i3 < w3.size(); ++i3, ++idx) fn(idx, w1[i1], w2[i2], w3[i3]);
}

// Multiplies f by a real or complex symbol sym(xi1, xi2, xi3).
template <class Sym>
void apply_symbol(SpectralField& f, Sym&& sym) {
  cplx* d = f.data();
  for_modes(f.grid(), [&](std::size_t idx, double a, double b, double c) { d[idx] *= sym(a, b, c); });
}

inline double modulus(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

void check_same_grid(const Grid& a, const Grid& b);

}  // namespace ec::detail
