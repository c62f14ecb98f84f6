#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pmech/kernels.hpp"

using namespace pmech;
using namespace pmech::kernels;

namespace {

grid::Grid2D random_grid(const grid::Axis& a, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  return grid::sample(a, a, [&](double u, double v) {
    const double env = std::exp(-decay * (u * u + v * v));
    return Complex(nd(rng), nd(rng)) * env;
  });
}

double rel(const grid::Grid2D& a, const grid::Grid2D& b) { return grid::max_abs(a - b) / grid::max_abs(b); }

std::vector<FieldMV> random_field(const clifford::MetricPtr& m, std::size_t sites, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1, 1);
  std::vector<FieldMV> f;
  const clifford::Blade top = clifford::Blade{1} << m->dim();
  for (std::size_t s = 0; s < sites; ++s) {
    FieldMV x(m);
    for (clifford::Blade b = 0; b < top; ++b) x.set(b, ud(rng));
    f.push_back(x);
  }
  return f;
}

}  // namespace

TEST_CASE("twisted convolution: FFT version equals the direct sum") {
  const auto a = grid::Axis::centered(3.0, 16);
  const auto k1 = random_grid(a, 1, 0.5), k2 = random_grid(a, 2, 0.8);
  for (double theta : {0.0, 0.7, -2.3}) {
    const auto ref = reference::twisted_convolution(k1, k2, theta);
    const auto par = parallel::twisted_convolution(k1, k2, theta);
    CHECK(rel(par, ref) < 1e-12);
  }
}

TEST_CASE("twisted convolution at theta = 0 is the ordinary convolution") {
  const auto a = grid::Axis::centered(2.0, 8);
  const auto k1 = random_grid(a, 3, 0.3), k2 = random_grid(a, 4, 0.3);
  const auto out = reference::twisted_convolution(k1, k2, 0.0);
  // out(z) at the centre: cell * sum_{z'} k1(z') k2(-z')
  Complex acc{};
  const std::size_t n = 8;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) acc += k1(i, j) * k2((n - i) % n, (n - j) % n);
  acc *= k1.cell();
  CHECK(std::abs(out(n / 2, n / 2) - acc) < 1e-12);
}

TEST_CASE("kernel action: parallel equals reference") {
  const auto ka = grid::Axis::centered(2.0, 12);
  const auto fa = grid::Axis::centered(5.0, 32);
  const auto k = random_grid(ka, 5, 1.0);
  const auto f = grid::sample(fa, fa, [](double q, double p) { return Complex(std::exp(-q * q - p * p), q); });
  for (double hbar : {0.5, 1.0}) CHECK(rel(parallel::kernel_action(hbar, k, f), reference::kernel_action(hbar, k, f)) < 1e-11);
}

TEST_CASE("leapfrog step: parallel equals reference, with and without space") {
  LeapfrogParams prm;
  prm.dt = 0.05;
  prm.h = 0.1;
  prm.force = {0.0, 1.0, 0.0, 0.5};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(-1, 1);
  const std::size_t n = 37;
  std::vector<double> q(n), p0(n), p1(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = ud(rng), p0[i] = ud(rng), p1[i] = ud(rng);
  auto q2 = q, p02 = p0, p12 = p1;
  for (int s = 0; s < 20; ++s) {
    reference::leapfrog_step(q, p0, p1, prm);
    parallel::leapfrog_step(q2, p02, p12, prm);
  }
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(q2[i] == doctest::Approx(q[i]).epsilon(1e-14));
    CHECK(p02[i] == doctest::Approx(p0[i]).epsilon(1e-14));
    CHECK(p12[i] == doctest::Approx(p1[i]).epsilon(1e-14));
  }

  // 1+0: harmonic particle, one period returns close to the start.
  LeapfrogParams osc;
  osc.dt = 1e-3;
  osc.force = {0.0, 1.0};
  // p0 lives at t = -dt/2
  std::vector<double> x{1.0}, v{std::sin(0.5 * osc.dt)}, none;
  const int steps = static_cast<int>(std::round(2 * std::numbers::pi / osc.dt));
  for (int s = 0; s < steps; ++s) parallel::leapfrog_step(x, v, none, osc);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("Dirac pairing: parallel equals reference and leaves boundaries zero") {
  const auto m = clifford::make_metric({1, -1});
  Lattice lat{{5, 8}, {0.2, 0.1}, {false, true}};
  lat.validate(2);
  const auto f = random_field(m, lat.sites(), 11);
  const auto ref = reference::dirac_pairing(f, lat, m);
  const auto par = parallel::dirac_pairing(f, lat, m);
  REQUIRE(ref.size() == lat.sites());
  for (std::size_t s = 0; s < lat.sites(); ++s) {
    for (clifford::Blade b = 0; b < 4; ++b) CHECK(par[s].component(b) == doctest::Approx(ref[s].component(b)));
    if (!lat.interior(s)) CHECK(ref[s].is_zero());
  }
}

TEST_CASE("Dirac pairing of a linear scalar field") {
  // f = a u0 + b u1 (scalar): -1/2 (e^mu d_mu f + d_mu f e^mu) = -(a e^0 + b e^1)
  const auto m = clifford::make_metric({1, -1});
  Lattice lat{{4, 4}, {0.5, 0.25}, {false, false}};
  const double a = 1.5, b = -0.75;
  std::vector<FieldMV> f;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      f.push_back(FieldMV::scalar(m, a * 0.5 * double(i) + b * 0.25 * double(j)));
  const auto out = reference::dirac_pairing(f, lat, m);
  const std::size_t s = 1 * 4 + 2;
  REQUIRE(lat.interior(s));
  CHECK(out[s].component(0b01) == doctest::Approx(-a));
  CHECK(out[s].component(0b10) == doctest::Approx(-b));
  CHECK(out[s].scalar_part() == doctest::Approx(0.0));
}

TEST_CASE("lattice geometry") {
  Lattice lat{{3, 4}, {1.0, 1.0}, {false, true}};
  CHECK(lat.sites() == 12);
  CHECK(lat.neighbour(0, 1, -1) == 3);
  CHECK(lat.neighbour(5, 0, 1) == 9);
  CHECK_FALSE(lat.interior(0));
  CHECK(lat.interior(4));
  CHECK_FALSE(lat.interior(8));
  CHECK_THROWS(lat.validate(3));
  CHECK_THROWS((Lattice{{3, 4}, {1.0}, {false, true}}.validate(2)));
}

TEST_CASE("parallel kernels give identical bits for any thread count") {
  const auto a = grid::Axis::centered(3.0, 32);
  const auto k1 = random_grid(a, 21, 0.5), k2 = random_grid(a, 22, 0.5);
  const auto m = clifford::make_metric({1, -1});
  Lattice lat{{16, 32}, {0.1, 0.1}, {false, true}};
  const auto f = random_field(m, lat.sites(), 23);

  set_threads(1);
  const auto c1 = parallel::twisted_convolution(k1, k2, 0.4);
  const auto d1 = parallel::dirac_pairing(f, lat, m);
  set_threads(4);
  const auto c4 = parallel::twisted_convolution(k1, k2, 0.4);
  const auto d4 = parallel::dirac_pairing(f, lat, m);
  set_threads(0);
  CHECK(c1.values() == c4.values());
  for (std::size_t s = 0; s < d1.size(); ++s) CHECK(d1[s] == d4[s]);
  CHECK(max_threads() >= 1);
}

TEST_CASE("power series by Horner") {
  CHECK(power_series({1.0, 2.0, 3.0}, 2.0) == doctest::Approx(17.0));
  CHECK(power_series({}, 5.0) == 0.0);
}
