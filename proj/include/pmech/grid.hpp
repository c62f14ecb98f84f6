#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pmech/rational.hpp"

namespace pmech::grid {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic axis: n samples at min + i*step, step = (max - min)/n.
/// The point `max` itself is the periodic image of `min`.
struct Axis {
  double min = -1.0;
  double max = 1.0;
  std::size_t n = 2;

  double length() const { return max - min; }
  double step() const { return length() / static_cast<double>(n); }
  double at(std::size_t i) const { return min + static_cast<double>(i) * step(); }
  /// Frequency (cycles per unit) of DFT bin m.
  double frequency(std::size_t m) const;
  void validate() const;

  /// [-half_width, half_width) with n samples; at(n/2) == 0 for even n.
  static Axis centered(double half_width, std::size_t n) { return {-half_width, half_width, n}; }
  /// Centered axis paired with this one by the continuous Fourier transform:
  /// step * reciprocal().step * n == 1.
  Axis reciprocal() const;

  bool operator==(const Axis&) const = default;
};

/// Complex samples on the product of two axes, row-major (index i along a0, j along a1).
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(Axis a0, Axis a1);
  Grid2D(Axis a0, Axis a1, std::vector<Complex> values);

  const Axis& axis0() const { return a0_; }
  const Axis& axis1() const { return a1_; }
  std::size_t rows() const { return a0_.n; }
  std::size_t cols() const { return a1_.n; }
  std::size_t size() const { return values_.size(); }

  Complex& operator()(std::size_t i, std::size_t j) { return values_[i * a1_.n + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return values_[i * a1_.n + j]; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }

  /// Area element of the trapezoidal (periodic) rule.
  double cell() const { return a0_.step() * a1_.step(); }
  bool same_lattice(const Grid2D& o) const { return a0_ == o.a0_ && a1_ == o.a1_; }
  void check_same_lattice(const Grid2D& o) const;

  Grid2D& operator+=(const Grid2D& o);
  Grid2D& operator-=(const Grid2D& o);
  Grid2D& operator*=(Complex s);
  friend Grid2D operator+(Grid2D a, const Grid2D& b) { return a += b; }
  friend Grid2D operator-(Grid2D a, const Grid2D& b) { return a -= b; }
  friend Grid2D operator*(Complex s, Grid2D a) { return a *= s; }

 private:
  Axis a0_;
  Axis a1_;
  std::vector<Complex> values_;
};

/// Phase-space function f(q, p) for one degree of freedom: axis0 = q, axis1 = p.
using PhaseGrid = Grid2D;

/// Partial Fourier transform k(hbar; x, y) of a group kernel at fixed hbar:
/// axis0 = x, axis1 = y.
struct TwistedKernel {
  double hbar = 1.0;
  Grid2D samples;
};

Grid2D sample(const Axis& a0, const Axis& a1, const std::function<Complex(double, double)>& f);

/// Discrete L2 norm sqrt(sum |f|^2 * cell).
double l2_norm(const Grid2D& f);
double max_abs(const Grid2D& f);
bool all_finite(const Grid2D& f);

/// Largest |f| on the outermost ring of samples relative to max |f| (0 for f == 0).
double edge_ratio(const Grid2D& f);
/// Throws GridError when edge_ratio(f) exceeds `threshold`.
void check_decay(const Grid2D& f, double threshold, const char* what);

/// Continuous Fourier transform by the rectangle rule between paired lattices:
///   out(k0, k1) = sum_{i,j} f(u0_i, u1_j) e^{sign 2 pi i (u0_i k0 + u1_j k1)} du0 du1,
/// with targets given by the reciprocal axes. Exact inverse pairs for sign = +-1
/// on centered axes.
Grid2D fourier(const Grid2D& f, int sign);
Grid2D fourier(const Grid2D& f, int sign, const Axis& target0, const Axis& target1);

enum class DerivativeScheme { Spectral, FiniteDifference4 };

/// d f / d u_axis on the periodic lattice.
Grid2D derivative(const Grid2D& f, int axis, DerivativeScheme scheme);

/// g(u) = f(u + delta e_axis), by the Fourier shift theorem (exact for band-limited data).
Grid2D shift(const Grid2D& f, int axis, double delta);

/// In-place versions on raw rows of length `n` (used by the kernels).
void fourier_shift_rows(std::span<Complex> data, std::size_t rows, const Axis& axis, double delta);

}  // namespace pmech::grid
