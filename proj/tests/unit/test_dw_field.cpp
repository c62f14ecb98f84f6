#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmech/dw_field.hpp"

using namespace pmech;
using namespace pmech::dw;

namespace {

constexpr double kPi = std::numbers::pi;

const MetricPtr kTime = clifford::make_metric({1});
const MetricPtr kMinkowski2 = clifford::make_metric({1, -1});

DWHamiltonian kg(std::string_view s = "p0^2/2 - p1^2/2 + q^2/2") { return DWHamiltonian::parse(s, kMinkowski2); }

// Cauchy data for one Fourier mode on a periodic box of n sites, q = cos(k x).
CauchyData mode_data(double k, std::size_t n, double q_dot_amp) {
  CauchyData d;
  d.h = 2 * kPi / k / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = d.h * static_cast<double>(i);
    d.q.push_back(std::cos(k * x));
    d.q_dot.push_back(q_dot_amp * std::sin(k * x));
  }
  return d;
}

}  // namespace

TEST_CASE("Legendre transform of the free scalar field") {
  const auto L = LagrangianSpec::free_scalar(kMinkowski2, Rational(3));
  CHECK(L.L == LagrangianSpec::parse("v0^2/2 - v1^2/2 - 3/2*q^2", kMinkowski2).L);
  const auto leg = dw_legendre(L);
  CHECK(leg.hamiltonian == kg("p0^2/2 - p1^2/2 + 3/2*q^2"));
  REQUIRE(leg.momenta.size() == 2);
  CHECK(leg.momenta[1] == LagrangianSpec::parse("-v1", kMinkowski2).L);
  CHECK(dw_legendre_inverse(leg.hamiltonian).L == L.L);
}

TEST_CASE("Legendre transform with a linear term and a quartic potential") {
  // p = 3 v + 2, v = (p - 2)/3, H = p v - L = (p - 2)^2/6 + q^4
  const auto L = LagrangianSpec::parse("3*v0^2/2 + 2*v0 - q^4", kTime);
  const auto leg = dw_legendre(L);
  CHECK(leg.hamiltonian == DWHamiltonian::parse("(p0 - 2)^2/6 + q^4", kTime));
  CHECK(leg.velocities[0] == DWHamiltonian::parse("p0/3 - 2/3", kTime).H);
  CHECK(dw_legendre_inverse(leg.hamiltonian).L == L.L);
}

TEST_CASE("Legendre transform rejects what it cannot invert") {
  CHECK_THROWS_AS(dw_legendre(LagrangianSpec::parse("v0^3", kTime)), LegendreError);
  CHECK_THROWS_AS(dw_legendre(LagrangianSpec::parse("q*v0^2", kTime)), LegendreError);
  CHECK_THROWS_AS(dw_legendre(LagrangianSpec::parse("v0^2/2 + q", kMinkowski2)), LegendreError);
  CHECK_THROWS(LagrangianSpec::parse("v2", kMinkowski2));
  CHECK_THROWS(DWHamiltonian::parse("p0", nullptr));
}

TEST_CASE("right-hand sides of the field equations") {
  const double p[] = {1.0, 2.0};
  const auto r = dw_rhs(kg("p0^2/2 - p1^2/2 + q^2/2 + q^4/4"), 0.5, p);
  CHECK(r.dH_dp[0] == doctest::Approx(1.0));
  CHECK(r.dH_dp[1] == doctest::Approx(-2.0));
  CHECK(r.minus_dH_dq == doctest::Approx(-0.5 - 0.125));
  const double bad[] = {1.0};
  CHECK_THROWS(dw_rhs(kg(), 0.0, bad));
}

TEST_CASE("Klein-Gordon form extraction") {
  const auto f = klein_gordon_form(kg("p0^2/2 - 3*p1^2/2 + q^2/2 + q^4/4"));
  CHECK(f.c == std::vector<double>{1.0, -3.0});
  for (double x : {-1.3, 0.0, 0.7}) {
    CHECK(kernels::power_series(f.force, x) == doctest::Approx(x + x * x * x));
    CHECK(kernels::power_series(f.potential, x) == doctest::Approx(x * x / 2 + x * x * x * x / 4));
  }
  CHECK_THROWS(klein_gordon_form(kg("q*p0 + p1^2")));
  CHECK_THROWS(klein_gordon_form(kg("p0^2/2 + q^2")));
}

TEST_CASE("1+0 dimensions reduce to the harmonic oscillator") {
  const auto H = DWHamiltonian::parse("p0^2/2 + q^2/2", kTime);
  CauchyData d;
  d.q = {1.0};
  d.q_dot = {0.0};
  IntegrationOptions o;
  o.dt = 1e-3;
  o.steps = 6284;
  const auto run = integrate_dw(H, d, o);
  CHECK(run.state.q.size() == o.steps + 1);
  for (std::size_t s = 0; s < run.times.size(); s += 500) {
    CHECK(run.state.q[s] == doctest::Approx(std::cos(run.times[s])).epsilon(1e-6));
    CHECK(run.state.p[0][s] == doctest::Approx(-std::sin(run.times[s])).scale(1.0).epsilon(1e-6));
  }
  CHECK(run.max_energy_drift < 1e-13);
  d.q = {1.0, 2.0};
  d.q_dot = {0.0, 0.0};
  CHECK_THROWS(integrate_dw(H, d, o));
}

TEST_CASE("an exact lattice mode oscillates at the discrete frequency") {
  // With q_dot = sin(w_d dt)/dt sin(kx) the staggered scheme starts on a pure travelling
  // mode of its own, so the measured frequency is the discrete one to rounding.
  const double k = 3.0, m2 = 1.0, dt_over_h = 0.5;
  const std::size_t n = 20;
  const double h = 2 * kPi / k / n, dt = dt_over_h * h;
  const double wd = discrete_frequency(k, m2, dt, h);
  const auto d = mode_data(k, n, std::sin(wd * dt) / dt);
  IntegrationOptions o;
  o.dt = dt;
  o.steps = 400;
  const auto run = integrate_dw(kg(), d, o);
  CHECK(measure_frequency(run, 1) == doctest::Approx(wd).epsilon(1e-10));
  for (std::size_t s = 0; s <= o.steps; s += 37)
    for (std::size_t i = 0; i < n; i += 3)
      CHECK(run.state.q[s * n + i] ==
            doctest::Approx(std::cos(k * h * i - wd * dt * s)).scale(1.0).epsilon(1e-10));
  CHECK(run.max_energy_drift < 1e-12);
}

TEST_CASE("discrete dispersion approaches the continuum") {
  const double k = 2.0, m2 = 1.0, w = std::sqrt(k * k + m2);
  double prev = 1.0;
  for (double h : {0.2, 0.1, 0.05}) {
    const double err = std::abs(discrete_frequency(k, m2, h / 2, h) - w);
    CHECK(err < prev / 3.5);
    prev = err;
  }
  CHECK_THROWS(discrete_frequency(0.0, -1.0, 0.1, 0.1));
  CHECK_THROWS(discrete_frequency(30.0, 1.0, 0.5, 0.1));
}

TEST_CASE("nonlinear field: energy stays bounded, CFL enforced, kernels agree") {
  const auto H = kg("p0^2/2 - p1^2/2 + q^2/2 + q^4/4");
  auto d = mode_data(1.0, 64, 1.0);
  IntegrationOptions o;
  o.dt = 0.5 * d.h;
  o.steps = 2000;
  const auto par = integrate_dw(H, d, o);
  o.reference = true;
  const auto ref = integrate_dw(H, d, o);
  double diff = 0.0;
  for (std::size_t s = 0; s < par.state.q.size(); ++s) diff = std::max(diff, std::abs(par.state.q[s] - ref.state.q[s]));
  CHECK(diff < 1e-12);
  CHECK(par.max_energy_drift < 1e-3);
  CHECK(par.constraint_residual < 0.05);
  o.dt = 1.1 * d.h;
  CHECK_THROWS_AS(integrate_dw(H, d, o), std::invalid_argument);
  CHECK_THROWS(integrate_dw(kg("p0^2/2 + p1^2/2 + q^2/2"), d, IntegrationOptions{}));
}

TEST_CASE("plane-wave state samples the exact solution") {
  const double k = 2.0, w = std::sqrt(5.0), dt = 0.05;
  const auto st = plane_wave_state(kg(), k, 5, 16, dt);
  const double h = kPi / 16;
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t i = 0; i < 16; i += 5) {
      const double ph = k * h * i - w * dt * t;
      const std::size_t s = t * 16 + i;
      CHECK(st.q[s] == doctest::Approx(std::cos(ph)));
      CHECK(st.p[0][s] == doctest::Approx(w * std::sin(ph)).scale(1.0));
      CHECK(st.p[1][s] == doctest::Approx(k * std::sin(ph)).scale(1.0));
    }
  CHECK_THROWS(plane_wave_state(kg("p0^2/2 - p1^2/2 + q^4"), k, 5, 16, dt));
}

TEST_CASE("Dirac pairing of a linear scalar field is exact") {
  // f = a u0 + b u1: -1/2 (e^mu d_mu f + d_mu f e^mu) = -(a e^0 + b e^1)
  kernels::Lattice lat{{5, 6}, {0.1, 0.2}, {false, false}};
  std::vector<clifford::Multivector<double>> f;
  const double a = 1.5, b = -0.4;
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t i = 0; i < 6; ++i)
      f.push_back(clifford::Multivector<double>::scalar(kMinkowski2, a * 0.1 * t + b * 0.2 * i));
  const auto out = dirac_pairing(f, lat, kMinkowski2);
  const auto ref = dirac_pairing(f, lat, kMinkowski2, true);
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (!lat.interior(s)) {
      CHECK(out[s].is_zero());
      continue;
    }
    CHECK(out[s].component(0b01) == doctest::Approx(-a));
    CHECK(out[s].component(0b10) == doctest::Approx(-b));
    CHECK(ref[s].component(0b01) == out[s].component(0b01));
    CHECK(dirac_pairing_at(f, lat, kMinkowski2, s).component(0b10) == doctest::Approx(-b));
  }
  CHECK_THROWS(dirac_pairing_at(f, lat, kMinkowski2, 0));
  CHECK_THROWS(dirac_pairing_at(f, lat, kMinkowski2, 1000));
}

TEST_CASE("Clifford field bracket of H with q and with e_nu p^nu") {
  const auto Hc = promote(kg());
  const auto bq = clifford_field_bracket(Hc, field_q(kMinkowski2), kMinkowski2);
  // {H, q} = -sum_mu dH/dp^mu e^mu = -(p0 e0 - p1 e1)
  const double pt[] = {0.3, 2.0, 5.0};
  const auto vq = evaluate(bq, pt, kMinkowski2);
  CHECK(vq.component(0b01) == doctest::Approx(-2.0));
  CHECK(vq.component(0b10) == doctest::Approx(5.0));
  const auto vp = evaluate(clifford_field_bracket(Hc, combined_momentum(kMinkowski2), kMinkowski2), pt, kMinkowski2);
  // dH/dq e^mu e_mu = 2 q
  CHECK(vp.scalar_part() == doctest::Approx(0.6));
  CHECK_THROWS(evaluate(bq, std::span<const double>(pt, 2), kMinkowski2));
}

TEST_CASE("field equations reduce to the Dirac pairing") {
  const auto H = kg();
  std::vector<double> dev;
  for (std::size_t n : {32u, 64u}) {
    const double h = kPi / static_cast<double>(n);
    const auto rep = verify_field_reduction(H, plane_wave_state(H, 2.0, 10, n, 0.5 * h));
    REQUIRE(rep.components.size() == 3);
    CHECK(rep.components[2].kappa_expected == doctest::Approx(0.5));
    CHECK(rep.max_ratio_variance() < 1e-10);
    double worst = 0.0;
    for (const auto& c : rep.components) {
      REQUIRE(c.kappa.has_value());
      CHECK(c.sites_used > 0);
      worst = std::max(worst, std::abs(*c.kappa / c.kappa_expected - 1.0));
    }
    REQUIRE(rep.kappa_q.has_value());
    CHECK(*rep.kappa_q == doctest::Approx(1.0).epsilon(0.05));
    dev.push_back(worst);
  }
  CHECK(std::log2(dev[0] / dev[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Galilean composite is exposed for fields") {
  CHECK(galilean_composite(kMinkowski2).size() == 2);
}
