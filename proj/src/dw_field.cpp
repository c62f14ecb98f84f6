#include "pmech/dw_field.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace pmech::dw {

namespace {

using poly::Exponents;
using poly::RationalPolynomial;

poly::VariableResolver resolver(char momentum, std::size_t dim) {
  return [momentum, dim](std::string_view name) -> std::optional<std::size_t> {
    if (name == "q") return 0;
    if (name.size() < 2 || name[0] != momentum) return std::nullopt;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc{} || ptr != name.data() + name.size() || idx >= dim) return std::nullopt;
    return 1 + idx;
  };
}

std::vector<std::string> names(char momentum, std::size_t dim) {
  std::vector<std::string> out{"q"};
  for (std::size_t mu = 0; mu < dim; ++mu) out.push_back(std::string(1, momentum) + std::to_string(mu));
  return out;
}

// Replaces every variable i of p by subs[i] (all over the same variable set).
RationalPolynomial compose(const RationalPolynomial& p, const std::vector<RationalPolynomial>& subs) {
  const std::size_t nv = subs.front().nvars();
  RationalPolynomial out(nv);
  for (const auto& [e, c] : p.terms()) {
    RationalPolynomial term = RationalPolynomial::constant(nv, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) term = term * subs[i];
    out += term;
  }
  return out;
}

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) throw LegendreError("kinetic form is not invertible");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

struct QuadraticLegendre {
  std::vector<RationalPolynomial> conjugates;  // dF/da_mu over (q, a)
  std::vector<RationalPolynomial> solved;      // a_mu over (q, b)
  RationalPolynomial transformed{1};           // b.a - F over (q, b)
};

// Legendre transform of F(q, a_0..a_n), at most quadratic in a with constant quadratic part.
QuadraticLegendre legendre_quadratic(const RationalPolynomial& F, std::size_t dim) {
  const std::size_t nv = dim + 1;
  std::vector<std::vector<Rational>> K(dim, std::vector<Rational>(dim, Rational(0)));
  std::vector<RationalPolynomial> J(dim, RationalPolynomial(nv));
  for (const auto& [e, c] : F.terms()) {
    unsigned deg = 0;
    for (std::size_t mu = 0; mu < dim; ++mu) deg += e[1 + mu];
    if (deg > 2) throw LegendreError("Legendre transform needs a function at most quadratic in the slopes");
    if (deg == 2 && e[0] != 0) throw LegendreError("kinetic form must not depend on q");
    if (deg == 2) {
      std::vector<std::size_t> idx;
      for (std::size_t mu = 0; mu < dim; ++mu)
        for (unsigned k = 0; k < e[1 + mu]; ++k) idx.push_back(mu);
      if (idx[0] == idx[1]) {
        K[idx[0]][idx[0]] += 2 * c;
      } else {
        K[idx[0]][idx[1]] += c;
        K[idx[1]][idx[0]] += c;
      }
    } else if (deg == 1) {
      for (std::size_t mu = 0; mu < dim; ++mu)
        if (e[1 + mu] == 1) {
          Exponents qe(nv, 0);
          qe[0] = e[0];
          J[mu].add_term(qe, c);
        }
    }
  }
  const auto Kinv = invert(K);
  QuadraticLegendre out;
  for (std::size_t mu = 0; mu < dim; ++mu) out.conjugates.push_back(F.derivative(1 + mu));
  for (std::size_t mu = 0; mu < dim; ++mu) {
    RationalPolynomial a(nv);
    for (std::size_t nu = 0; nu < dim; ++nu) {
      if (sgn(Kinv[mu][nu]) == 0) continue;
      RationalPolynomial b = RationalPolynomial::variable(nv, 1 + nu, Rational(1)) - J[nu];
      a += b.scaled_left(Kinv[mu][nu]);
    }
    out.solved.push_back(std::move(a));
  }
  std::vector<RationalPolynomial> subs{RationalPolynomial::variable(nv, 0, Rational(1))};
  for (const auto& a : out.solved) subs.push_back(a);
  RationalPolynomial G(nv);
  for (std::size_t mu = 0; mu < dim; ++mu)
    G += RationalPolynomial::variable(nv, 1 + mu, Rational(1)) * out.solved[mu];
  G -= compose(F, subs);
  out.transformed = std::move(G);
  return out;
}

void check_metric(const MetricPtr& metric) {
  if (!metric) throw std::invalid_argument("DW objects need a metric");
}

double power_series(const std::vector<double>& c, double x) { return kernels::power_series(c, x); }

}  // namespace

LagrangianSpec LagrangianSpec::parse(std::string_view text, MetricPtr metric) {
  check_metric(metric);
  const std::size_t dim = metric->dim();
  return {metric, poly::parse_polynomial(text, dim + 1, resolver('v', dim))};
}

LagrangianSpec LagrangianSpec::free_scalar(MetricPtr metric, const Rational& mass_squared) {
  check_metric(metric);
  const std::size_t dim = metric->dim(), nv = dim + 1;
  RationalPolynomial L(nv);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    Exponents e(nv, 0);
    e[1 + mu] = 2;
    L.add_term(e, metric->eta(mu) / 2);
  }
  Exponents e(nv, 0);
  e[0] = 2;
  L.add_term(e, -mass_squared / 2);
  return {metric, L};
}

std::string LagrangianSpec::to_string() const {
  const auto n = names('v', metric->dim());
  return poly::format_polynomial(L, n);
}

DWHamiltonian DWHamiltonian::parse(std::string_view text, MetricPtr metric) {
  check_metric(metric);
  const std::size_t dim = metric->dim();
  return {metric, poly::parse_polynomial(text, dim + 1, resolver('p', dim))};
}

std::string DWHamiltonian::to_string() const {
  const auto n = names('p', metric->dim());
  return poly::format_polynomial(H, n);
}

LegendreResult dw_legendre(const LagrangianSpec& L) {
  check_metric(L.metric);
  const auto t = legendre_quadratic(L.L, L.metric->dim());
  return {t.conjugates, t.solved, DWHamiltonian{L.metric, t.transformed}};
}

LagrangianSpec dw_legendre_inverse(const DWHamiltonian& H) {
  check_metric(H.metric);
  const auto t = legendre_quadratic(H.H, H.metric->dim());
  return {H.metric, t.transformed};
}

Rhs dw_rhs(const DWHamiltonian& H, double q, std::span<const double> p) {
  const std::size_t dim = H.dim();
  if (p.size() != dim) throw std::invalid_argument("dw_rhs: need one polymomentum per dimension");
  std::vector<double> pt{q};
  pt.insert(pt.end(), p.begin(), p.end());
  Rhs r;
  for (std::size_t mu = 0; mu < dim; ++mu) r.dH_dp.push_back(poly::evaluate(H.H.derivative(1 + mu), pt));
  r.minus_dH_dq = -poly::evaluate(H.H.derivative(0), pt);
  return r;
}

KleinGordonForm klein_gordon_form(const DWHamiltonian& H) {
  const std::size_t dim = H.dim();
  KleinGordonForm f;
  f.c.assign(dim, 0.0);
  for (const auto& [e, c] : H.H.terms()) {
    unsigned pdeg = 0;
    std::size_t which = 0;
    for (std::size_t mu = 0; mu < dim; ++mu)
      if (e[1 + mu] != 0) {
        pdeg += e[1 + mu];
        which = mu;
      }
    if (pdeg == 0) {
      if (f.potential.size() <= e[0]) f.potential.resize(e[0] + 1u, 0.0);
      f.potential[e[0]] += c.get_d();
    } else if (pdeg == 2 && e[1 + which] == 2 && e[0] == 0) {
      f.c[which] = 2.0 * c.get_d();
    } else {
      throw std::invalid_argument("Hamiltonian is not of the form 1/2 sum c_mu (p^mu)^2 + V(q)");
    }
  }
  for (std::size_t mu = 0; mu < dim; ++mu)
    if (f.c[mu] == 0.0) throw std::invalid_argument("Hamiltonian lacks a (p^mu)^2 term");
  for (std::size_t k = 1; k < f.potential.size(); ++k) {
    if (f.force.size() < k) f.force.resize(k, 0.0);
    f.force[k - 1] = static_cast<double>(k) * f.potential[k];
  }
  return f;
}

// ---------------------------------------------------------------------------

IntegrationResult integrate_dw(const DWHamiltonian& H, const CauchyData& data,
                               const IntegrationOptions& opt) {
  const std::size_t dim = H.dim();
  if (dim != 1 && dim != 2) throw std::invalid_argument("integrate_dw supports 1+0 and 1+1 dimensions");
  const KleinGordonForm form = klein_gordon_form(H);
  const bool space = dim == 2;
  const std::size_t n = data.q.size();
  if (data.q_dot.size() != n) throw std::invalid_argument("Cauchy data sizes differ");
  if (!space && n != 1) throw std::invalid_argument("1+0 dimensions take a single site");
  if (space && n < 3) throw std::invalid_argument("need at least 3 spatial sites");
  if (!(opt.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double c0 = form.c[0];
  const double c1 = space ? form.c[1] : 0.0;
  if (space) {
    if (!(data.h > 0.0)) throw std::invalid_argument("spatial step must be positive");
    if (c0 * c1 >= 0.0) throw std::invalid_argument("metric must be hyperbolic (c_0 c_1 < 0)");
    if (opt.dt > data.h * (1.0 + 1e-12)) throw std::invalid_argument("CFL violated: dt > h");
  }
  const double h = data.h;
  const double dt = opt.dt;

  kernels::LeapfrogParams prm{dt, h, c0, space ? c1 : -1.0, form.force};
  std::vector<double> q = data.q, p0(n), p1(space ? n : 0);
  for (std::size_t i = 0; i < n; ++i) p0[i] = data.q_dot[i] / c0;
  for (std::size_t i = 0; space && i < n; ++i) p1[i] = (q[(i + 1) % n] - q[i]) / (h * c1);

  auto divergence = [&](std::size_t i) {
    return space ? (p1[i] - p1[(i + n - 1) % n]) / h : 0.0;
  };
  auto kick_rate = [&](std::size_t i) { return -power_series(form.force, q[i]) - divergence(i); };

  // Potential split into the quadratic part (paired across slices) and the rest (averaged).
  const double v2 = form.potential.size() > 2 ? 2.0 * form.potential[2] : 0.0;
  std::vector<double> rest = form.potential;
  if (rest.size() > 2) rest[2] = 0.0;
  auto pair_potential = [&](double a, double b) {
    return 0.5 * v2 * a * b + 0.5 * (power_series(rest, a) + power_series(rest, b));
  };

  IntegrationResult res;
  DWState& st = res.state;
  st.metric = H.metric;
  const std::size_t slices = opt.steps + 1;
  st.lattice.shape = space ? std::vector<std::size_t>{slices, n} : std::vector<std::size_t>{slices};
  st.lattice.spacing = space ? std::vector<double>{dt, h} : std::vector<double>{dt};
  st.lattice.periodic = space ? std::vector<bool>{false, true} : std::vector<bool>{false};
  st.q.reserve(slices * n);
  st.p.assign(dim, {});

  auto record = [&](const std::vector<double>& p0_sync, double t) {
    res.times.push_back(t);
    for (std::size_t i = 0; i < n; ++i) {
      st.q.push_back(q[i]);
      st.p[0].push_back(p0_sync[i]);
      if (space) {
        st.p[1].push_back(0.5 * (p1[i] + p1[(i + n - 1) % n]));
        const double dq = (q[(i + 1) % n] - q[(i + n - 1) % n]) / (2 * h);
        res.constraint_residual = std::max(res.constraint_residual, std::abs(dq - c1 * st.p[1].back()));
      }
    }
  };
  record(p0, 0.0);

  // Back up half a step so that the kernel's kick lands on p0 at +dt/2.
  for (std::size_t i = 0; i < n; ++i) p0[i] -= 0.5 * dt * kick_rate(i);

  std::vector<double> q_prev(n), p1_prev(p1.size()), sync(n);
  double e_first = 0.0;
  for (std::size_t s = 0; s < opt.steps; ++s) {
    q_prev = q;
    p1_prev = p1;
    if (opt.reference)
      kernels::reference::leapfrog_step(q, p0, p1, prm);
    else
      kernels::parallel::leapfrog_step(q, p0, p1, prm);
    for (double v : q)
      if (!std::isfinite(v)) throw std::runtime_error("integrate_dw: blow-up at step " + std::to_string(s + 1));

    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      e += 0.5 * c0 * p0[i] * p0[i] + pair_potential(q[i], q_prev[i]);
      if (space) e -= 0.5 * c1 * p1[i] * p1_prev[i];
    }
    if (space) e *= h;
    res.energy.push_back(e);
    if (s == 0) e_first = e;
    const double scale = std::abs(e_first) > 0.0 ? std::abs(e_first) : 1.0;
    res.max_energy_drift = std::max(res.max_energy_drift, std::abs(e - e_first) / scale);

    for (std::size_t i = 0; i < n; ++i) sync[i] = p0[i] + 0.5 * dt * kick_rate(i);
    record(sync, dt * static_cast<double>(s + 1));
  }
  return res;
}

double discrete_frequency(double k, double mass_squared, double dt, double h, double c0, double c1) {
  const double kk = 2.0 / h * std::sin(k * h / 2.0);
  const double w2 = c0 * (mass_squared - kk * kk / c1);
  if (!(w2 > 0.0)) throw std::invalid_argument("no real frequency for this mode");
  const double arg = std::sqrt(w2) * dt / 2.0;
  if (arg > 1.0) throw std::invalid_argument("mode is unstable at this time step");
  return 2.0 / dt * std::asin(arg);
}

DWState plane_wave_state(const DWHamiltonian& H, double k, std::size_t n_time, std::size_t n_space,
                         double dt, int periods_in_box) {
  if (H.dim() != 2) throw std::invalid_argument("plane waves need 1+1 dimensions");
  const KleinGordonForm form = klein_gordon_form(H);
  if (form.force.size() > 2 || (form.force.size() == 2 && form.force[0] != 0.0) ||
      (form.force.size() == 1 && form.force[0] != 0.0))
    throw std::invalid_argument("plane waves need a free (quadratic) potential");
  const double m2 = form.force.size() == 2 ? form.force[1] : 0.0;
  const double c0 = form.c[0], c1 = form.c[1];
  const double w2 = c0 * (m2 - k * k / c1);
  if (!(w2 > 0.0)) throw std::invalid_argument("plane wave frequency is not real");
  const double w = std::sqrt(w2);
  const double L = 2.0 * std::numbers::pi * periods_in_box / k;
  const double h = L / static_cast<double>(n_space);

  DWState st;
  st.metric = H.metric;
  st.lattice.shape = {n_time, n_space};
  st.lattice.spacing = {dt, h};
  st.lattice.periodic = {false, true};
  st.p.assign(2, {});
  for (std::size_t t = 0; t < n_time; ++t)
    for (std::size_t i = 0; i < n_space; ++i) {
      const double u0 = dt * static_cast<double>(t), u1 = h * static_cast<double>(i);
      const double phase = k * u1 - w * u0;
      st.q.push_back(std::cos(phase));
      st.p[0].push_back(w * std::sin(phase) / c0);
      st.p[1].push_back(-k * std::sin(phase) / c1);
    }
  return st;
}

double measure_frequency(const IntegrationResult& run, std::size_t mode) {
  const auto& lat = run.state.lattice;
  if (lat.shape.size() != 2) throw std::invalid_argument("frequency measurement needs 1+1 dimensions");
  const std::size_t nt = lat.shape[0], nx = lat.shape[1];
  std::vector<double> phase(nt);
  double prev = 0.0, offset = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    Complex a{};
    for (std::size_t i = 0; i < nx; ++i)
      a += run.state.q[t * nx + i] *
           std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(mode * i) / static_cast<double>(nx));
    const double ph = std::arg(a);
    if (t > 0) {
      double d = ph - prev;
      while (d > std::numbers::pi) {
        d -= 2 * std::numbers::pi;
        offset -= 2 * std::numbers::pi;
      }
      while (d < -std::numbers::pi) {
        d += 2 * std::numbers::pi;
        offset += 2 * std::numbers::pi;
      }
    }
    prev = ph;
    phase[t] = ph + offset;
  }
  double st = 0, sp = 0, stt = 0, stp = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    const double x = run.times[t];
    st += x;
    sp += phase[t];
    stt += x * x;
    stp += x * phase[t];
  }
  const double m = static_cast<double>(nt);
  return std::abs((m * stp - st * sp) / (m * stt - st * st));
}

// ---------------------------------------------------------------------------

CliffordPolyObservable promote(const DWHamiltonian& H) {
  const auto metric = H.metric;
  return H.H.map_coefficients([&metric](const Rational& c) { return Multivector::scalar(metric, c); });
}

CliffordPolyObservable field_q(const MetricPtr& metric) {
  return CliffordPolyObservable::variable(metric->dim() + 1, 0, Multivector::scalar(metric, Rational(1)));
}

CliffordPolyObservable combined_momentum(const MetricPtr& metric) {
  const std::size_t dim = metric->dim();
  CliffordPolyObservable out(dim + 1);
  for (std::size_t nu = 0; nu < dim; ++nu)
    out += CliffordPolyObservable::variable(dim + 1, 1 + nu, clifford::lower_index<Rational>(metric, nu));
  return out;
}

CliffordPolyObservable clifford_field_bracket(const CliffordPolyObservable& k1,
                                              const CliffordPolyObservable& k2, const MetricPtr& metric) {
  k1.check_vars(k2);
  const std::size_t dim = metric->dim();
  if (k1.nvars() != dim + 1) throw clifford::MetricError("observable does not match the metric dimension");
  CliffordPolyObservable out(dim + 1);
  const auto dq1 = k1.derivative(0), dq2 = k2.derivative(0);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    const auto e = clifford::generator<Rational>(metric, mu);
    out += dq1.scaled_right(e) * k2.derivative(1 + mu);
    out -= k1.derivative(1 + mu).scaled_right(e) * dq2;
  }
  return out;
}

clifford::Multivector<double> evaluate(const CliffordPolyObservable& k, std::span<const double> point,
                                       const MetricPtr& metric) {
  if (point.size() != k.nvars()) throw std::invalid_argument("evaluation point has wrong length");
  clifford::Multivector<double> out(metric);
  for (const auto& [e, c] : k.terms()) {
    double mono = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) mono *= std::pow(point[i], static_cast<int>(e[i]));
    for (const auto& [b, v] : c.coeffs()) out.add_to(b, v.get_d() * mono);
  }
  return out;
}

std::vector<clifford::Multivector<double>> dirac_pairing(std::span<const clifford::Multivector<double>> f,
                                                         const kernels::Lattice& lattice,
                                                         const MetricPtr& metric, bool reference) {
  return reference ? kernels::reference::dirac_pairing(f, lattice, metric)
                   : kernels::parallel::dirac_pairing(f, lattice, metric);
}

clifford::Multivector<double> dirac_pairing_at(std::span<const clifford::Multivector<double>> f,
                                               const kernels::Lattice& lattice, const MetricPtr& metric,
                                               std::size_t site) {
  lattice.validate(metric->dim());
  if (f.size() != lattice.sites()) throw std::invalid_argument("field size does not match lattice");
  if (site >= f.size()) throw std::out_of_range("site index out of range");
  if (!lattice.interior(site)) throw std::invalid_argument("Dirac pairing needs an interior site");
  clifford::Multivector<double> out(metric);
  for (std::size_t mu = 0; mu < metric->dim(); ++mu) {
    auto d = f[lattice.neighbour(site, mu, +1)] - f[lattice.neighbour(site, mu, -1)];
    d *= 1.0 / (2.0 * lattice.spacing[mu]);
    const auto e = clifford::generator<double>(metric, mu);
    out += e * d;
    out += d * e;
  }
  out *= -0.5;
  return out;
}

// ---------------------------------------------------------------------------

double ReductionReport::max_ratio_variance() const {
  double v = 0.0;
  for (const auto& c : components) v = std::max(v, c.ratio_variance);
  return v;
}

namespace {

ComponentCheck compare(std::string name, const std::vector<double>& lhs, const std::vector<double>& rhs,
                       double expected) {
  ComponentCheck c;
  c.name = std::move(name);
  c.kappa_expected = expected;
  double peak = 0.0;
  for (double r : rhs) peak = std::max(peak, std::abs(r));
  if (peak == 0.0) {
    for (double l : lhs) c.max_residual = std::max(c.max_residual, std::abs(l));
    return c;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < lhs.size(); ++s) {
    num += lhs[s] * rhs[s];
    den += rhs[s] * rhs[s];
  }
  c.kappa = num / den;
  double mean = 0.0;
  std::vector<double> ratios;
  for (std::size_t s = 0; s < lhs.size(); ++s)
    if (std::abs(rhs[s]) > 0.1 * peak) ratios.push_back(lhs[s] / rhs[s]);
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  for (double r : ratios) c.ratio_variance += (r - mean) * (r - mean);
  c.ratio_variance /= static_cast<double>(ratios.size());
  c.sites_used = ratios.size();
  for (std::size_t s = 0; s < lhs.size(); ++s)
    c.max_residual = std::max(c.max_residual, std::abs(lhs[s] - *c.kappa * rhs[s]));
  return c;
}

}  // namespace

ReductionReport verify_field_reduction(const DWHamiltonian& H, const DWState& state) {
  const auto& metric = H.metric;
  const std::size_t dim = metric->dim();
  if (state.p.size() != dim) throw std::invalid_argument("state has the wrong number of polymomenta");
  state.lattice.validate(dim);

  std::vector<clifford::Multivector<double>> qf, pf;
  qf.reserve(state.sites());
  pf.reserve(state.sites());
  std::vector<clifford::Multivector<double>> lower;
  for (std::size_t nu = 0; nu < dim; ++nu) lower.push_back(clifford::lower_index<double>(metric, nu));
  for (std::size_t s = 0; s < state.sites(); ++s) {
    qf.push_back(clifford::Multivector<double>::scalar(metric, state.q[s]));
    clifford::Multivector<double> m(metric);
    for (std::size_t nu = 0; nu < dim; ++nu) m += lower[nu] * state.p[nu][s];
    pf.push_back(std::move(m));
  }
  const auto lhs_q = dirac_pairing(qf, state.lattice, metric);
  const auto lhs_p = dirac_pairing(pf, state.lattice, metric);

  const auto Hc = promote(H);
  const auto br_q = clifford_field_bracket(Hc, field_q(metric), metric);
  const auto br_p = clifford_field_bracket(Hc, combined_momentum(metric), metric);

  std::vector<std::vector<double>> lq(dim), rq(dim);
  std::vector<double> lp, rp;
  std::vector<double> pt(dim + 1);
  for (std::size_t s = 0; s < state.sites(); ++s) {
    if (!state.lattice.interior(s)) continue;
    pt[0] = state.q[s];
    for (std::size_t mu = 0; mu < dim; ++mu) pt[1 + mu] = state.p[mu][s];
    const auto vq = evaluate(br_q, pt, metric);
    const auto vp = evaluate(br_p, pt, metric);
    for (std::size_t mu = 0; mu < dim; ++mu) {
      const clifford::Blade b = clifford::Blade{1} << mu;
      lq[mu].push_back(lhs_q[s].component(b));
      rq[mu].push_back(vq.component(b));
    }
    lp.push_back(lhs_p[s].scalar_part());
    rp.push_back(vp.scalar_part());
  }

  ReductionReport rep;
  std::vector<double> all_l, all_r;
  for (std::size_t mu = 0; mu < dim; ++mu) {
    rep.components.push_back(compare("q:e" + std::to_string(mu), lq[mu], rq[mu], 1.0));
    all_l.insert(all_l.end(), lq[mu].begin(), lq[mu].end());
    all_r.insert(all_r.end(), rq[mu].begin(), rq[mu].end());
  }
  rep.components.push_back(compare("p:scalar", lp, rp, 1.0 / static_cast<double>(dim)));
  rep.kappa_q = compare("q", all_l, all_r, 1.0).kappa;
  return rep;
}

}  // namespace pmech::dw
