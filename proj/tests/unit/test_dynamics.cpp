#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmech/dynamics.hpp"
#include "pmech/kernels.hpp"

using namespace pmech;
using namespace pmech::dynamics;

namespace {

constexpr double kPi = std::numbers::pi;

HamiltonianSpec H(std::string_view s, std::size_t n = 1) { return {Observable::parse(s, n)}; }

double coeff(const poly::RealPolynomial& p, poly::Exponents e) { return p.coefficient(e).value_or(0.0); }

}  // namespace

TEST_CASE("harmonic oscillator follows cos and sin") {
  const auto tr = evolve_classical(H("(p^2 + q^2)/2"), {1.0}, {0.0}, 2 * kPi, 1e-3, Integrator::RK4, 50);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(tr.q[k][0] == doctest::Approx(std::cos(tr.times[k])).epsilon(1e-9));
    CHECK(tr.p[k][0] == doctest::Approx(-std::sin(tr.times[k])).scale(1.0).epsilon(1e-9));
  }
  CHECK(tr.times.back() == 2 * kPi);
  CHECK(std::abs(tr.q.back()[0] - 1.0) < 1e-8);
  CHECK(tr.max_energy_drift < 1e-12);
}

TEST_CASE("final record sits at t_end even when dt does not divide it") {
  const auto tr = evolve_classical(H("p^2/2"), {0.0}, {2.0}, 1.0, 0.3);
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.q.back()[0] == doctest::Approx(2.0));
  CHECK(tr.times.size() == 5);
}

TEST_CASE("leapfrog conserves energy to O(dt^2) and rejects mixed H") {
  const auto lf = evolve_classical(H("p^2/2 + q^4/4"), {1.0}, {0.0}, 10.0, 1e-2, Integrator::Leapfrog);
  CHECK(lf.max_energy_drift < 1e-4);
  const auto lf2 = evolve_classical(H("p^2/2 + q^4/4"), {1.0}, {0.0}, 10.0, 5e-3, Integrator::Leapfrog);
  CHECK(lf.max_energy_drift / lf2.max_energy_drift == doctest::Approx(4.0).epsilon(0.1));
  CHECK_THROWS_AS(evolve_classical(H("q*p"), {1.0}, {0.0}, 1.0, 0.1, Integrator::Leapfrog), std::invalid_argument);
  CHECK(to_string(Integrator::Leapfrog) == "leapfrog");
}

TEST_CASE("two coupled oscillators exchange energy") {
  // H = (p1^2 + p2^2 + q1^2 + q2^2)/2 + k q1 q2: normal modes at sqrt(1 +- k)
  const double k = 0.2, t = 3.0;
  const auto tr = evolve_classical(H("(p1^2 + p2^2 + q1^2 + q2^2)/2 + 1/5*q1*q2", 2), {1.0, 0.0}, {0.0, 0.0}, t, 1e-3);
  const double wp = std::sqrt(1 + k), wm = std::sqrt(1 - k);
  CHECK(tr.q.back()[0] == doctest::Approx(0.5 * (std::cos(wp * t) + std::cos(wm * t))).epsilon(1e-9));
  CHECK(tr.q.back()[1] == doctest::Approx(0.5 * (std::cos(wp * t) - std::cos(wm * t))).epsilon(1e-9));
}

TEST_CASE("blow-up and bad input are reported") {
  CHECK_THROWS_AS(evolve_classical(H("-q^4/4 + p^2/2"), {0.0}, {20.0}, 50.0, 0.1), BlowUp);
  CHECK_THROWS_AS(evolve_classical(H("p^2"), {1.0, 2.0}, {0.0}, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(evolve_classical(H("p^2"), {1.0}, {0.0}, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("monomial basis size") {
  CHECK(monomial_basis(1, 3).size() == 10);  // C(2+3, 3)
  CHECK(monomial_basis(2, 2).size() == 15);  // C(4+2, 2)
}

TEST_CASE("Moyal evolution of linear observables under quadratic H is classical") {
  const auto osc = H("(p^2 + q^2)/2");
  for (double hbar : {0.0, 0.3, 3.0}) {
    const auto tr = evolve_observable_moyal(osc, Observable::parse("q + 2*p", 1), hbar, 1.0, 1e-3);
    const auto f = tr.snapshot(tr.times.size() - 1);
    CHECK(coeff(f, {1, 0}) == doctest::Approx(std::cos(1.0) - 2 * std::sin(1.0)).epsilon(1e-10));
    CHECK(coeff(f, {0, 1}) == doctest::Approx(std::sin(1.0) + 2 * std::cos(1.0)).epsilon(1e-10));
  }
}

TEST_CASE("quadratic observables under quadratic H: q^2 rotates") {
  // q(t) = q cos t + p sin t, so q^2 -> q^2 cos^2 + 2 q p sin cos + p^2 sin^2
  const auto tr = evolve_observable_moyal(H("(p^2 + q^2)/2"), Observable::parse("q^2", 1), 1.0, 0.7, 1e-3);
  const auto f = tr.snapshot(tr.times.size() - 1);
  const double c = std::cos(0.7), s = std::sin(0.7);
  CHECK(coeff(f, {2, 0}) == doctest::Approx(c * c).epsilon(1e-10));
  CHECK(coeff(f, {1, 1}) == doctest::Approx(2 * s * c).epsilon(1e-10));
  CHECK(coeff(f, {0, 2}) == doctest::Approx(s * s).epsilon(1e-10));
  CHECK(std::abs(coeff(f, {0, 0})) < 1e-12);
}

TEST_CASE("anharmonic Moyal evolution: first quantum correction") {
  // For H = p^2/2 + g q^4/4 and f = p^3 the only extra term of ub(f, H) at t = 0 is
  // -lambda^2/3! f Lambda^3 H = -lambda^2/6 * (-(3!)(3!) g q) = 6 g lambda^2 q.
  const double g = 1.0, hbar = 2.0, lam = hbar / (4 * kPi), dt = 1e-5, t = 1e-3;
  const auto spec = H("p^2/2 + q^4/4");
  const auto tr = evolve_observable_moyal(spec, Observable::parse("p^3", 1), hbar, t, dt, 5);
  const auto cl = evolve_observable_moyal(spec, Observable::parse("p^3", 1), 0.0, t, dt, 5);
  const double c = coeff(tr.snapshot(tr.times.size() - 1), {1, 0}) - coeff(cl.snapshot(cl.times.size() - 1), {1, 0});
  CHECK(c == doctest::Approx(6 * g * lam * lam * t).epsilon(1e-2));
}

TEST_CASE("high-degree H needs a truncation") {
  CHECK_THROWS_AS(evolve_observable_moyal(H("p^2/2 + q^4/4"), Observable::q(1), 1.0, 1.0, 1e-2), TruncationRequired);
  CHECK_THROWS_AS(evolve_observable_moyal(H("p^2/2 + q^4/4"), Observable::parse("q^5", 1), 1.0, 1.0, 1e-2, 3),
                  std::invalid_argument);
}

TEST_CASE("quartic gap scales as hbar^2 and is stable in the truncation") {
  const auto tab = moyal_vs_poisson_gap(H("p^2/2 + q^2/2 + q^4/4"), Observable::q(1), {0.2, 0.1, 0.05}, 1.0, 1e-3, 11);
  REQUIRE(tab.slope.has_value());
  CHECK(*tab.slope == doctest::Approx(2.0).epsilon(0.05));
  for (double c : tab.truncation_change) CHECK(c < 0.05);
  const auto zero = moyal_vs_poisson_gap(H("(p^2 + q^2)/2"), Observable::q(1), {0.0, 1.0}, 1.0, 1e-2);
  CHECK(zero.gap[0] == 0.0);
  CHECK(zero.gap[1] == 0.0);
  CHECK_FALSE(zero.slope.has_value());
}

TEST_CASE("gap table does not depend on the thread count") {
  const auto spec = H("p^2/2 + q^2/2 + q^4/4");
  kernels::set_threads(1);
  const auto a = moyal_vs_poisson_gap(spec, Observable::q(1), {0.4, 0.2, 0.1}, 0.5, 1e-3, 7);
  kernels::set_threads(3);
  const auto b = moyal_vs_poisson_gap(spec, Observable::q(1), {0.4, 0.2, 0.1}, 0.5, 1e-3, 7);
  kernels::set_threads(0);
  CHECK(a.gap == b.gap);
}

TEST_CASE("log-log slope fit") {
  CHECK(fit_loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK(fit_loglog_slope({1, 10, 0, 100}, {1, 0.1, 5, 0.01}) == doctest::Approx(-1.0));
  CHECK_THROWS(fit_loglog_slope({1.0}, {1.0}));
}
