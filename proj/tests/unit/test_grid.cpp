#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmech/fft.hpp"
#include "pmech/grid.hpp"

using namespace pmech;
using namespace pmech::grid;

namespace {

constexpr double kPi = std::numbers::pi;

Grid2D gaussian(const Axis& a, double c0 = 0.0, double c1 = 0.0) {
  return sample(a, a, [&](double u, double v) {
    return Complex(std::exp(-kPi * ((u - c0) * (u - c0) + (v - c1) * (v - c1))), 0.0);
  });
}

double max_diff(const Grid2D& a, const Grid2D& b) { return max_abs(a - b); }

}  // namespace

TEST_CASE("DFT matches the direct sum") {
  const std::size_t n = 12;
  std::vector<Complex> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = Complex(std::sin(0.3 * j), std::cos(1.1 * j * j));
  auto y = x;
  fft::transform_1d(y, fft::Direction::Forward);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += x[j] * std::polar(1.0, -2 * kPi * double(j * k) / double(n));
    CHECK(std::abs(y[k] - acc) < 1e-12);
  }
  fft::transform_1d(y, fft::Direction::Backward);
  for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(y[j] / double(n) - x[j]) < 1e-13);
}

TEST_CASE("2-D transform factorises into rows and columns") {
  const std::size_t r = 6, c = 10;
  std::vector<Complex> a(r * c);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = Complex(std::cos(0.7 * k), 0.1 * k);
  auto b = a;
  fft::transform_2d(a, r, c, fft::Direction::Forward);
  fft::transform_rows(b, r, c, fft::Direction::Forward);
  fft::transform_cols(b, r, c, fft::Direction::Forward);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
}

TEST_CASE("signed bins") {
  CHECK(fft::signed_bin(0, 8) == 0);
  CHECK(fft::signed_bin(3, 8) == 3);
  CHECK(fft::signed_bin(4, 8) == -4);
  CHECK(fft::signed_bin(7, 8) == -1);
  CHECK(fft::signed_bin(2, 5) == 2);
  CHECK(fft::signed_bin(3, 5) == -2);
}

TEST_CASE("axes") {
  const auto a = Axis::centered(3.0, 8);
  CHECK(a.step() == doctest::Approx(0.75));
  CHECK(a.at(4) == doctest::Approx(0.0));
  const auto r = a.reciprocal();
  CHECK(a.step() * r.step() * 8 == doctest::Approx(1.0));
  CHECK(r.at(4) == doctest::Approx(0.0));
  CHECK(a.frequency(7) == doctest::Approx(-1.0 / 6.0));
  CHECK_THROWS_AS((Axis{0.0, 1.0, 1}.validate()), GridError);
  CHECK_THROWS_AS((Axis{1.0, 1.0, 4}.validate()), GridError);
  CHECK_THROWS_AS((Axis{0.0, INFINITY, 4}.validate()), GridError);
  CHECK_THROWS_AS(Grid2D(a, a, std::vector<Complex>(3)), GridError);
}

TEST_CASE("the unit Gaussian is its own continuous Fourier transform") {
  const auto a = Axis::centered(6.0, 128);
  const auto g = gaussian(a);
  for (int sign : {-1, 1}) {
    const auto f = fourier(g, sign);
    const auto want = gaussian(f.axis0());
    CHECK(max_diff(f, want) < 1e-12);
  }
}

TEST_CASE("forward and backward transforms are inverse") {
  const auto a = Axis::centered(5.0, 48);
  const auto g = sample(a, a, [](double u, double v) {
    return Complex(std::exp(-2 * (u - 0.4) * (u - 0.4) - v * v), u * v * std::exp(-u * u - v * v));
  });
  const auto back = fourier(fourier(g, -1), 1, a, a);
  CHECK(max_diff(back, g) < 1e-12);
  CHECK_THROWS_AS(fourier(g, 1, a, a), GridError);
}

TEST_CASE("shifted Gaussian picks up the expected phase") {
  const auto a = Axis::centered(6.0, 128);
  const double c = 0.5;
  const auto f = fourier(gaussian(a, c, 0.0), -1);
  const auto want = sample(f.axis0(), f.axis1(), [&](double k0, double k1) {
    return std::exp(-kPi * (k0 * k0 + k1 * k1)) * std::polar(1.0, -2 * kPi * k0 * c);
  });
  CHECK(max_diff(f, want) < 1e-12);
}

TEST_CASE("spectral derivative is exact for a Gaussian") {
  const auto a = Axis::centered(6.0, 128);
  const auto g = gaussian(a);
  const auto d0 = derivative(g, 0, DerivativeScheme::Spectral);
  const auto want = sample(a, a, [](double u, double v) {
    return Complex(-2 * kPi * u * std::exp(-kPi * (u * u + v * v)), 0.0);
  });
  CHECK(max_diff(d0, want) < 1e-12);
  CHECK_THROWS_AS(derivative(g, 2, DerivativeScheme::Spectral), GridError);
}

TEST_CASE("fourth-order differences converge at fourth order") {
  std::vector<double> err;
  for (std::size_t n : {32u, 64u, 128u}) {
    const auto a = Axis::centered(4.0, n);
    const auto g = sample(a, a, [](double u, double v) { return Complex(std::sin(kPi * u / 2) * std::cos(kPi * v / 4), 0.0); });
    const auto d = derivative(g, 1, DerivativeScheme::FiniteDifference4);
    const auto want = sample(a, a, [](double u, double v) {
      return Complex(-kPi / 4 * std::sin(kPi * u / 2) * std::sin(kPi * v / 4), 0.0);
    });
    err.push_back(max_diff(d, want));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Fourier shift moves band-limited data exactly") {
  const auto a = Axis::centered(6.0, 128);
  const auto g = gaussian(a);
  const auto s = shift(g, 1, 0.37);
  CHECK(max_diff(s, gaussian(a, 0.0, -0.37)) < 1e-12);
  const auto s0 = shift(g, 0, -1.1);
  CHECK(max_diff(s0, gaussian(a, 1.1, 0.0)) < 1e-12);
  CHECK(max_diff(shift(s, 1, -0.37), g) < 1e-12);
}

TEST_CASE("norms and decay checks") {
  const auto a = Axis::centered(6.0, 64);
  const auto g = gaussian(a);
  // int e^{-2 pi (u^2 + v^2)} = 1/2
  CHECK(l2_norm(g) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(max_abs(g) == doctest::Approx(1.0));
  CHECK(all_finite(g));
  CHECK(edge_ratio(g) < 1e-40);
  CHECK_NOTHROW(check_decay(g, 1e-8, "gaussian"));
  const auto flat = sample(a, a, [](double, double) { return Complex(1.0, 0.0); });
  CHECK(edge_ratio(flat) == doctest::Approx(1.0));
  CHECK_THROWS_AS(check_decay(flat, 1e-8, "flat"), GridError);
  auto bad = g;
  bad(3, 3) = Complex(NAN, 0.0);
  CHECK_FALSE(all_finite(bad));
  CHECK_THROWS_AS(g + gaussian(Axis::centered(5.0, 64)), GridError);
}
