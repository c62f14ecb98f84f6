#pragma once

// Hot loops in two flavours: `reference` is plain serial code kept as the test
// oracle, `parallel` is the OpenMP version used by the library. Both produce the
// same values up to floating-point reassociation; `parallel` results do not depend
// on the thread count.

#include <span>
#include <vector>

#include "pmech/clifford.hpp"
#include "pmech/grid.hpp"

namespace pmech::kernels {

/// Parameters of one staggered leapfrog step for the 1+1 (or 1+0) DW scalar field
///   d_0 q = eta_00 p^0,  d_1 q = eta_11 p^1,  d_0 p^0 + d_1 p^1 = -V'(q).
/// q and p^1 live on integer time slices, p^0 on half slices; p^1 sits on the
/// half sites i + 1/2 of a periodic u^1 lattice. An empty p^1 means 1+0 dimensions.
struct LeapfrogParams {
  double dt = 0.01;
  double h = 0.1;
  double eta00_lower = 1.0;
  double eta11_lower = -1.0;
  /// V'(q) as power-series coefficients c_0 + c_1 q + c_2 q^2 + ...
  std::vector<double> force;
};

/// Discrete coordinate lattice for the Dirac pairing: row-major, axis 0 slowest.
struct Lattice {
  std::vector<std::size_t> shape;
  std::vector<double> spacing;
  std::vector<bool> periodic;

  std::size_t sites() const;
  /// False if a central difference along a non-periodic axis would leave the lattice.
  bool interior(std::size_t site) const;
  /// Flat index of the neighbour at offset `step` (+1 or -1) along `axis`.
  std::size_t neighbour(std::size_t site, std::size_t axis, int step) const;
  void validate(std::size_t dim) const;
};

using FieldMV = clifford::Multivector<double>;

namespace reference {

/// out(z) = cell * sum_{z'} e^{i theta (x y' - y x')} k1(z') k2(z - z'), with z - z'
/// wrapped periodically on a centered lattice of even size. Direct O(N^4) sum.
grid::Grid2D twisted_convolution(const grid::Grid2D& k1, const grid::Grid2D& k2, double theta);

/// Quadrature of int k(x,y) e^{-2 pi i (qx + py)} f(q - hbar y/2, p + hbar x/2) dx dy.
grid::Grid2D kernel_action(double hbar, const grid::Grid2D& kernel, const grid::Grid2D& f);

void leapfrog_step(std::span<double> q, std::span<double> p0, std::span<double> p1,
                   const LeapfrogParams& params);

/// -1/2 (e^mu d_mu f + d_mu f e^mu) at interior sites; boundary sites are left zero.
std::vector<FieldMV> dirac_pairing(std::span<const FieldMV> field, const Lattice& lattice,
                                   const clifford::MetricPtr& metric);

}  // namespace reference

namespace parallel {

/// FFT-based evaluation of reference::twisted_convolution in O(N^3 log N).
grid::Grid2D twisted_convolution(const grid::Grid2D& k1, const grid::Grid2D& k2, double theta);

grid::Grid2D kernel_action(double hbar, const grid::Grid2D& kernel, const grid::Grid2D& f);

void leapfrog_step(std::span<double> q, std::span<double> p0, std::span<double> p1,
                   const LeapfrogParams& params);

std::vector<FieldMV> dirac_pairing(std::span<const FieldMV> field, const Lattice& lattice,
                                   const clifford::MetricPtr& metric);

}  // namespace parallel

/// Horner evaluation of a power series.
inline double power_series(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Sets the thread count used by `parallel` kernels (0 keeps the runtime default).
void set_threads(int threads);
int max_threads();

}  // namespace pmech::kernels
