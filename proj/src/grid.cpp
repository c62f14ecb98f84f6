#include "pmech/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pmech/fft.hpp"

namespace pmech::grid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

fft::Direction direction_of(int sign) {
  return sign > 0 ? fft::Direction::Backward : fft::Direction::Forward;
}

void check_pairing(const Axis& src, const Axis& dst) {
  if (src.n != dst.n) throw GridError("fourier: target axis has a different sample count");
  const double prod = src.step() * dst.step() * static_cast<double>(src.n);
  if (std::abs(prod - 1.0) > 1e-9)
    throw GridError("fourier: axes are not reciprocal (step product " + std::to_string(prod) + ")");
}

// Pre/post phases for a 1-D continuous transform between paired axes.
struct Phases {
  std::vector<Complex> pre, post;
};

Phases make_phases(const Axis& src, const Axis& dst, int sign) {
  const std::size_t n = src.n;
  const double d = src.step(), e = dst.step(), a0 = src.min, b0 = dst.min;
  const double s = sign > 0 ? 1.0 : -1.0;
  Phases ph;
  ph.pre.resize(n);
  ph.post.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    ph.pre[j] = std::polar(1.0, s * kTwoPi * static_cast<double>(j) * d * b0);
    ph.post[j] = d * std::polar(1.0, s * kTwoPi * a0 * (b0 + static_cast<double>(j) * e));
  }
  return ph;
}

}  // namespace

double Axis::frequency(std::size_t m) const {
  return static_cast<double>(fft::signed_bin(m, n)) / length();
}

void Axis::validate() const {
  if (n < 2) throw GridError("axis needs at least 2 samples");
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
    throw GridError("axis bounds must be finite with max > min");
}

Axis Axis::reciprocal() const {
  const double d = 1.0 / length();
  const double half = static_cast<double>(n / 2);
  return {-half * d, -half * d + static_cast<double>(n) * d, n};
}

Grid2D::Grid2D(Axis a0, Axis a1) : a0_(a0), a1_(a1) {
  a0_.validate();
  a1_.validate();
  values_.assign(a0_.n * a1_.n, Complex{});
}

Grid2D::Grid2D(Axis a0, Axis a1, std::vector<Complex> values)
    : a0_(a0), a1_(a1), values_(std::move(values)) {
  a0_.validate();
  a1_.validate();
  if (values_.size() != a0_.n * a1_.n) throw GridError("grid sample count does not match axes");
}

void Grid2D::check_same_lattice(const Grid2D& o) const {
  if (!same_lattice(o)) throw GridError("grids live on different lattices");
}

Grid2D& Grid2D::operator+=(const Grid2D& o) {
  check_same_lattice(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

Grid2D& Grid2D::operator-=(const Grid2D& o) {
  check_same_lattice(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

Grid2D& Grid2D::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Grid2D sample(const Axis& a0, const Axis& a1, const std::function<Complex(double, double)>& f) {
  Grid2D g(a0, a1);
  for (std::size_t i = 0; i < a0.n; ++i)
    for (std::size_t j = 0; j < a1.n; ++j) g(i, j) = f(a0.at(i), a1.at(j));
  return g;
}

double l2_norm(const Grid2D& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.cell());
}

double max_abs(const Grid2D& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Grid2D& f) {
  return std::all_of(f.values().begin(), f.values().end(),
                     [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double edge_ratio(const Grid2D& f) {
  const double peak = max_abs(f);
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  const std::size_t r = f.rows(), c = f.cols();
  for (std::size_t j = 0; j < c; ++j) edge = std::max({edge, std::abs(f(0, j)), std::abs(f(r - 1, j))});
  for (std::size_t i = 0; i < r; ++i) edge = std::max({edge, std::abs(f(i, 0)), std::abs(f(i, c - 1))});
  return edge / peak;
}

void check_decay(const Grid2D& f, double threshold, const char* what) {
  const double ratio = edge_ratio(f);
  if (ratio > threshold)
    throw GridError(std::string(what) + ": data does not decay inside the window (edge/peak = " +
                    std::to_string(ratio) + ")");
}

Grid2D fourier(const Grid2D& f, int sign) {
  return fourier(f, sign, f.axis0().reciprocal(), f.axis1().reciprocal());
}

Grid2D fourier(const Grid2D& f, int sign, const Axis& target0, const Axis& target1) {
  check_pairing(f.axis0(), target0);
  check_pairing(f.axis1(), target1);
  const std::size_t r = f.rows(), c = f.cols();
  const Phases p0 = make_phases(f.axis0(), target0, sign);
  const Phases p1 = make_phases(f.axis1(), target1, sign);
  std::vector<Complex> data = f.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= p0.pre[i] * p1.pre[j];
  fft::transform_2d(data, r, c, direction_of(sign));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= p0.post[i] * p1.post[j];
  return Grid2D(target0, target1, std::move(data));
}

Grid2D derivative(const Grid2D& f, int axis, DerivativeScheme scheme) {
  if (axis != 0 && axis != 1) throw GridError("derivative axis must be 0 or 1");
  const Axis& ax = axis == 0 ? f.axis0() : f.axis1();
  const std::size_t r = f.rows(), c = f.cols(), n = ax.n;
  Grid2D out(f.axis0(), f.axis1());

  if (scheme == DerivativeScheme::FiniteDifference4) {
    const double h = ax.step();
    auto at = [&](std::size_t i, std::size_t j, long off) {
      if (axis == 0) return f((i + n + static_cast<std::size_t>(off + 2) - 2) % n, j);
      return f(i, (j + n + static_cast<std::size_t>(off + 2) - 2) % n);
    };
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        out(i, j) = (-at(i, j, 2) + 8.0 * at(i, j, 1) - 8.0 * at(i, j, -1) + at(i, j, -2)) / (12.0 * h);
    return out;
  }

  std::vector<Complex> mult(n);
  for (std::size_t m = 0; m < n; ++m) mult[m] = Complex(0.0, kTwoPi * ax.frequency(m)) / static_cast<double>(n);
  if (n % 2 == 0) mult[n / 2] = 0.0;
  std::vector<Complex> data = f.values();
  if (axis == 1) {
    fft::transform_rows(data, r, c, fft::Direction::Forward);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= mult[j];
    fft::transform_rows(data, r, c, fft::Direction::Backward);
  } else {
    fft::transform_cols(data, r, c, fft::Direction::Forward);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= mult[i];
    fft::transform_cols(data, r, c, fft::Direction::Backward);
  }
  out.values() = std::move(data);
  return out;
}

namespace {

std::vector<Complex> shift_multipliers(const Axis& ax, double delta) {
  const std::size_t n = ax.n;
  std::vector<Complex> mult(n);
  for (std::size_t m = 0; m < n; ++m)
    mult[m] = std::polar(1.0 / static_cast<double>(n), kTwoPi * ax.frequency(m) * delta);
  // Nyquist bin: symmetric treatment keeps real data real.
  if (n % 2 == 0) mult[n / 2] = std::cos(std::numbers::pi * static_cast<double>(n) * delta / ax.length()) /
                                static_cast<double>(n);
  return mult;
}

}  // namespace

void fourier_shift_rows(std::span<Complex> data, std::size_t rows, const Axis& axis, double delta) {
  const std::size_t c = axis.n;
  const auto mult = shift_multipliers(axis, delta);
  fft::transform_rows(data, rows, c, fft::Direction::Forward);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= mult[j];
  fft::transform_rows(data, rows, c, fft::Direction::Backward);
}

Grid2D shift(const Grid2D& f, int axis, double delta) {
  if (axis != 0 && axis != 1) throw GridError("shift axis must be 0 or 1");
  if (delta == 0.0) return f;
  const std::size_t r = f.rows(), c = f.cols();
  std::vector<Complex> data = f.values();
  if (axis == 1) {
    fourier_shift_rows(data, r, f.axis1(), delta);
  } else {
    const auto mult = shift_multipliers(f.axis0(), delta);
    fft::transform_cols(data, r, c, fft::Direction::Forward);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) data[i * c + j] *= mult[i];
    fft::transform_cols(data, r, c, fft::Direction::Backward);
  }
  return Grid2D(f.axis0(), f.axis1(), std::move(data));
}

}  // namespace pmech::grid
