// Slow reference computations. Nothing here calls the FFT path or the symbol
// helpers of the production modules; sums are compensated.
#pragma once

#include <cstdint>
#include <functional>

#include "ec/spectral.hpp"

namespace ec::oracle {

struct Budget {
  int max_dft_n = 16;
  int max_bilinear_n = 12;
  int max_pointwise_n = 32;
  std::uint64_t seed = 1;
};

// Neumaier summation for complex values.
class CompensatedSum {
 public:
  void add(cplx v);
  cplx value() const { return {sr_ + cr_, si_ + ci_}; }

 private:
  double sr_ = 0.0, cr_ = 0.0, si_ = 0.0, ci_ = 0.0;
};

SpectralField dft_direct(const Grid& g, const CArray& phys, const Budget& budget = {});

using PairSymbol = std::function<cplx(const Vec3& xi, const Vec3& eta)>;

// (2 pi L)^-3 sum_eta e^{it Phi} m(xi, eta) G1(xi - eta) G2(eta), with
// Phi = -mu Lambda(xi) + mu1 Lambda(xi - eta) + mu2 Lambda(eta). Pairs whose
// difference leaves the lattice are dropped (no wrap-around).
SpectralField bilinear_direct(const SpectralField& g1, const SpectralField& g2, const PairSymbol& m,
                              int mu, int mu1, int mu2, double t, const Budget& budget = {});

// e^{sign i t Lambda} f evaluated at one physical point by a direct phase sum.
cplx semigroup_pointwise(const SpectralField& f, double t, int sign, const Vec3& x,
                         const Budget& budget = {});

using LinearOp = std::function<SpectralField(const SpectralField&)>;

struct NormEstimate {
  double power = 0.0;     // power iteration on A*A
  double gaussian = 0.0;  // best ratio |Ax|/|x| over Gaussian probes
  double estimate() const { return power > gaussian ? power : gaussian; }
};

NormEstimate operator_norm_probe(const LinearOp& op, const LinearOp& adjoint, const Grid& g, int trials,
                                 int power_iterations = 12, std::uint64_t seed = 1);

}  // namespace ec::oracle
