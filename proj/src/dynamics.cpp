#include "pmech/dynamics.hpp"

#include <cmath>
#include <map>

#include "pmech/brackets.hpp"

namespace pmech::dynamics {

namespace {

struct Gradient {
  std::size_t n;
  std::vector<poly::RealPolynomial> dq, dp;  // over 2n variables
  poly::RealPolynomial energy{0};

  explicit Gradient(const HamiltonianSpec& spec) : n(spec.n()) {
    // Classical phase space: drop h (set to 0) and the h slot.
    const auto& P = spec.H.poly();
    poly::RationalPolynomial classical(2 * n);
    for (const auto& [e, c] : P.terms()) {
      if (e[2 * n] != 0) continue;
      classical.add_term(poly::Exponents(e.begin(), e.begin() + static_cast<long>(2 * n)), c);
    }
    energy = poly::to_real(classical);
    for (std::size_t j = 0; j < n; ++j) {
      dq.push_back(poly::to_real(classical.derivative(j)));
      dp.push_back(poly::to_real(classical.derivative(n + j)));
    }
  }

  double H(const std::vector<double>& z) const { return poly::evaluate(energy, z); }

  // z = (q, p); returns (dH/dp, -dH/dq).
  std::vector<double> field(const std::vector<double>& z) const {
    std::vector<double> out(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = poly::evaluate(dp[j], z);
      out[n + j] = -poly::evaluate(dq[j], z);
    }
    return out;
  }
};

bool separable(const HamiltonianSpec& spec) {
  const std::size_t n = spec.n();
  for (const auto& [e, c] : spec.H.poly().terms()) {
    bool has_q = false, has_p = false;
    for (std::size_t j = 0; j < n; ++j) {
      has_q = has_q || e[j] != 0;
      has_p = has_p || e[n + j] != 0;
    }
    if (has_q && has_p) return false;
  }
  return true;
}

bool finite(const std::vector<double>& z) {
  for (double v : z)
    if (!std::isfinite(v)) return false;
  return true;
}

void rk4_step(const Gradient& g, std::vector<double>& z, double h) {
  const std::size_t m = z.size();
  auto add = [m](const std::vector<double>& a, const std::vector<double>& b, double s) {
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = a[k] + s * b[k];
    return r;
  };
  const auto k1 = g.field(z);
  const auto k2 = g.field(add(z, k1, h / 2));
  const auto k3 = g.field(add(z, k2, h / 2));
  const auto k4 = g.field(add(z, k3, h));
  for (std::size_t k = 0; k < m; ++k) z[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
}

void leapfrog_step(const Gradient& g, std::vector<double>& z, double h) {
  const std::size_t n = g.n;
  // Separable H: -dH/dq depends on q only, dH/dp on p only.
  auto kick = [&](double tau) {
    const auto f = g.field(z);
    for (std::size_t j = 0; j < n; ++j) z[n + j] += tau * f[n + j];
  };
  kick(h / 2);
  const auto f = g.field(z);
  for (std::size_t j = 0; j < n; ++j) z[j] += h * f[j];
  kick(h / 2);
}

std::vector<double> step_sizes(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be >= 0");
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<double> h(steps, dt);
  if (steps > 0) h.back() = t_end - dt * static_cast<double>(steps - 1);
  return h;
}

}  // namespace

std::string to_string(Integrator integrator) {
  return integrator == Integrator::RK4 ? "rk4" : "leapfrog";
}

BlowUp::BlowUp(std::size_t s, double t)
    : std::runtime_error("state became non-finite at step " + std::to_string(s) + " (t = " +
                         std::to_string(t) + ")"),
      step(s),
      time(t) {}

Trajectory evolve_classical(const HamiltonianSpec& spec, const std::vector<double>& q0,
                            const std::vector<double>& p0, double t_end, double dt,
                            Integrator integrator, std::size_t record_every) {
  const std::size_t n = spec.n();
  if (q0.size() != n || p0.size() != n) throw std::invalid_argument("initial state has wrong dimension");
  if (integrator == Integrator::Leapfrog && !separable(spec))
    throw std::invalid_argument("leapfrog needs a separable Hamiltonian T(p) + V(q)");
  if (record_every == 0) record_every = 1;
  const Gradient g(spec);
  const auto steps = step_sizes(t_end, dt);

  Trajectory tr;
  tr.integrator = integrator;
  tr.dt = dt;
  std::vector<double> z(q0);
  z.insert(z.end(), p0.begin(), p0.end());
  const double e0 = g.H(z);
  double t = 0.0;
  auto record = [&] {
    tr.times.push_back(t);
    tr.q.emplace_back(z.begin(), z.begin() + static_cast<long>(n));
    tr.p.emplace_back(z.begin() + static_cast<long>(n), z.end());
    const double e = g.H(z);
    tr.energy.push_back(e);
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(e - e0));
  };
  record();
  for (std::size_t s = 0; s < steps.size(); ++s) {
    if (integrator == Integrator::RK4)
      rk4_step(g, z, steps[s]);
    else
      leapfrog_step(g, z, steps[s]);
    t = s + 1 == steps.size() ? t_end : t + steps[s];
    if (!finite(z)) throw BlowUp(s + 1, t);
    if ((s + 1) % record_every == 0 || s + 1 == steps.size()) record();
  }
  return tr;
}

std::vector<poly::Exponents> monomial_basis(std::size_t n, int max_degree) {
  std::vector<poly::Exponents> out;
  poly::Exponents e(2 * n, 0);
  // Enumerate all exponent vectors with sum <= max_degree (odometer).
  while (true) {
    out.push_back(e);
    std::size_t k = 0;
    while (k < e.size()) {
      ++e[k];
      int sum = 0;
      for (auto v : e) sum += v;
      if (sum <= max_degree) break;
      e[k] = 0;
      ++k;
    }
    if (k == e.size()) break;
  }
  return out;
}

poly::RealPolynomial ObservableTrajectory::snapshot(std::size_t k) const {
  const std::size_t vars = basis.empty() ? 0 : basis.front().size();
  poly::RealPolynomial out(vars);
  for (std::size_t b = 0; b < basis.size(); ++b) out.add_term(basis[b], coefficients.at(k)[b]);
  return out;
}

namespace {

// Generator of f' = ub(f, H) on the monomial basis, graded by powers of the formal h:
// M(lambda) = sum_j lambda^j M_j. Images are truncated to the basis.
struct Generator {
  std::vector<poly::Exponents> basis;
  std::vector<std::vector<std::vector<double>>> graded;  // [power][row][col]

  Generator(const HamiltonianSpec& spec, int degree) : basis(monomial_basis(spec.n(), degree)) {
    const std::size_t n = spec.n(), m = basis.size();
    std::map<poly::Exponents, std::size_t> index;
    for (std::size_t b = 0; b < m; ++b) index.emplace(basis[b], b);
    for (std::size_t col = 0; col < m; ++col) {
      poly::Exponents e = basis[col];
      e.push_back(0);
      const Observable mono(n, poly::RationalPolynomial::monomial(2 * n + 1, e, Rational(1)));
      const Observable img = brackets::ub_bracket_poly(mono, spec.H);
      for (const auto& [ex, c] : img.poly().terms()) {
        const std::size_t power = ex[2 * n];
        const poly::Exponents key(ex.begin(), ex.begin() + static_cast<long>(2 * n));
        auto it = index.find(key);
        if (it == index.end()) continue;  // above the truncation degree
        while (graded.size() <= power) graded.emplace_back(m, std::vector<double>(m, 0.0));
        graded[power][it->second][col] += c.get_d();
      }
    }
    if (graded.empty()) graded.emplace_back(m, std::vector<double>(m, 0.0));
  }

  std::vector<std::vector<double>> at(double lambda) const {
    const std::size_t m = basis.size();
    std::vector<std::vector<double>> M(m, std::vector<double>(m, 0.0));
    double w = 1.0;
    for (const auto& G : graded) {
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) M[r][c] += w * G[r][c];
      w *= lambda;
    }
    return M;
  }
};

std::vector<double> matvec(const std::vector<std::vector<double>>& M, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t r = 0; r < M.size(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) acc += M[r][c] * v[c];
    out[r] = acc;
  }
  return out;
}

int required_degree(const HamiltonianSpec& spec, const Observable& f0, std::optional<int> truncation) {
  if (f0.n() != spec.n()) throw std::invalid_argument("observable and Hamiltonian differ in n");
  if (f0.h_degree() > 0) throw std::invalid_argument("initial observable must not depend on h");
  const int fd = std::max(0, f0.degree());
  if (truncation) {
    if (*truncation < fd) throw std::invalid_argument("truncation degree below the degree of f0");
    return *truncation;
  }
  if (spec.H.degree() > 2)
    throw TruncationRequired("Hamiltonian of degree > 2: supply a truncation degree");
  return fd;
}

ObservableTrajectory run(const Generator& gen, const Observable& f0, double hbar, double t_end, double dt,
                         int degree, std::size_t record_every) {
  const auto steps = step_sizes(t_end, dt);
  const auto M = gen.at(brackets::lambda_of_hbar(hbar));
  const std::size_t m = gen.basis.size();

  ObservableTrajectory tr;
  tr.hbar = hbar;
  tr.dt = dt;
  tr.truncation = degree;
  tr.basis = gen.basis;
  std::vector<double> c(m, 0.0);
  for (std::size_t b = 0; b < m; ++b) {
    poly::Exponents e = gen.basis[b];
    e.push_back(0);
    if (auto v = f0.poly().coefficient(e)) c[b] = v->get_d();
  }
  double t = 0.0;
  tr.times.push_back(t);
  tr.coefficients.push_back(c);
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const double h = steps[s];
    const auto k1 = matvec(M, c);
    std::vector<double> tmp(m);
    for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + h / 2 * k1[k];
    const auto k2 = matvec(M, tmp);
    for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + h / 2 * k2[k];
    const auto k3 = matvec(M, tmp);
    for (std::size_t k = 0; k < m; ++k) tmp[k] = c[k] + h * k3[k];
    const auto k4 = matvec(M, tmp);
    for (std::size_t k = 0; k < m; ++k) c[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    t = s + 1 == steps.size() ? t_end : t + h;
    if (!finite(c)) throw BlowUp(s + 1, t);
    const bool last = s + 1 == steps.size();
    if (last || (record_every != 0 && (s + 1) % record_every == 0)) {
      tr.times.push_back(t);
      tr.coefficients.push_back(c);
    }
  }
  return tr;
}

}  // namespace

ObservableTrajectory evolve_observable_moyal(const HamiltonianSpec& spec, const Observable& f0, double hbar,
                                             double t_end, double dt, std::optional<int> truncation,
                                             std::size_t record_every) {
  const int degree = required_degree(spec, f0, truncation);
  const Generator gen(spec, degree);
  return run(gen, f0, hbar, t_end, dt, degree, record_every);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) throw std::invalid_argument("slope fit needs at least two positive points");
  const double kk = static_cast<double>(k);
  return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

GapTable moyal_vs_poisson_gap(const HamiltonianSpec& spec, const Observable& f0,
                              const std::vector<double>& hbar_list, double t, double dt,
                              std::optional<int> truncation) {
  const int degree = required_degree(spec, f0, truncation);
  const bool check_truncation = spec.H.degree() > 2;
  const Generator gen(spec, degree);
  const Generator gen2 = check_truncation ? Generator(spec, degree + 2) : gen;

  // Norm over the monomials of degree <= `degree`, so D and D + 2 runs compare alike.
  auto gap_with = [&](const Generator& g, int d, double hbar) {
    const auto quantum = run(g, f0, hbar, t, dt, d, 0).coefficients.back();
    const auto classical = run(g, f0, 0.0, t, dt, d, 0).coefficients.back();
    double acc = 0.0;
    for (std::size_t k = 0; k < quantum.size(); ++k) {
      int deg = 0;
      for (auto v : g.basis[k]) deg += v;
      if (deg <= degree) acc += std::pow(quantum[k] - classical[k], 2);
    }
    return std::sqrt(acc);
  };

  GapTable table;
  table.hbar = hbar_list;
  table.gap.assign(hbar_list.size(), 0.0);
  table.truncation_change.assign(hbar_list.size(), 0.0);
  const long count = static_cast<long>(hbar_list.size());
#pragma omp parallel for schedule(dynamic)
  for (long il = 0; il < count; ++il) {
    const auto i = static_cast<std::size_t>(il);
    const double hb = hbar_list[i];
    if (hb == 0.0) continue;
    table.gap[i] = gap_with(gen, degree, hb);
    if (check_truncation) {
      const double g2 = gap_with(gen2, degree + 2, hb);
      table.truncation_change[i] = std::abs(table.gap[i] - g2) / std::max(table.gap[i], 1e-300);
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < hbar_list.size(); ++i)
    if (hbar_list[i] > 0.0 && table.gap[i] > 0.0) {
      xs.push_back(hbar_list[i]);
      ys.push_back(table.gap[i]);
    }
  if (xs.size() >= 2) table.slope = fit_loglog_slope(xs, ys);
  return table;
}

}  // namespace pmech::dynamics
