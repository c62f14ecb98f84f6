#include "pmech/twisted.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmech/kernels.hpp"

namespace pmech::twisted {

namespace {

constexpr double kPi = std::numbers::pi;

void check_pair(const TwistedKernel& k1, const TwistedKernel& k2) {
  if (k1.hbar != k2.hbar) throw grid::GridError("kernels carry different hbar");
  if (k1.hbar == 0.0 || !std::isfinite(k1.hbar))
    throw grid::GridError("grid brackets need a finite nonzero hbar; use the polynomial backend at hbar = 0");
  k1.samples.check_same_lattice(k2.samples);
  grid::check_decay(k1.samples, 1e-8, "twisted convolution");
  grid::check_decay(k2.samples, 1e-8, "twisted convolution");
}

grid::Grid2D convolve(const grid::Grid2D& a, const grid::Grid2D& b, double theta, Backend backend) {
  return backend == Backend::Parallel ? kernels::parallel::twisted_convolution(a, b, theta)
                                      : kernels::reference::twisted_convolution(a, b, theta);
}

// e^{+i theta w} part minus e^{-i theta w} part: 2i sin(theta w).
grid::Grid2D sine_pair(const TwistedKernel& k1, const TwistedKernel& k2, Backend backend) {
  check_pair(k1, k2);
  const double theta = kPi * k1.hbar;
  return convolve(k1.samples, k2.samples, theta, backend) -
         convolve(k1.samples, k2.samples, -theta, backend);
}

}  // namespace

TwistedKernel twisted_convolution(const TwistedKernel& k1, const TwistedKernel& k2, Backend backend) {
  check_pair(k1, k2);
  return {k1.hbar, convolve(k1.samples, k2.samples, kPi * k1.hbar, backend)};
}

TwistedKernel commutator_bracket_grid(const TwistedKernel& k1, const TwistedKernel& k2, Backend backend) {
  return {k1.hbar, sine_pair(k1, k2, backend)};
}

TwistedKernel ub_bracket_grid(const TwistedKernel& k1, const TwistedKernel& k2, Backend backend) {
  // (2 pi / hbar) sin = (2 pi / hbar) / (2i) * (2i sin)
  const Complex factor = Complex(0.0, -kPi / k1.hbar);
  return {k1.hbar, factor * sine_pair(k1, k2, backend)};
}

TwistedKernel antiderivative(const TwistedKernel& k) {
  if (k.hbar == 0.0) throw grid::GridError("antiderivative on a grid kernel needs hbar != 0");
  return {k.hbar, antiderivative_multiplier().value(k.hbar) * k.samples};
}

// ---------------------------------------------------------------------------

Multiplier Multiplier::normalized() const {
  Multiplier m = *this;
  if (sgn(m.coeff) == 0) return {Rational(0), 0, 0, 0};
  m.i_power = ((m.i_power % 4) + 4) % 4;
  if (m.i_power >= 2) {
    m.coeff = -m.coeff;
    m.i_power -= 2;
  }
  return m;
}

Complex Multiplier::value(double hbar) const {
  const Multiplier m = normalized();
  Complex v = m.coeff.get_d() * std::pow(kPi, m.pi_power) * std::pow(hbar, m.hbar_power);
  if (m.i_power == 1) v *= Complex(0.0, 1.0);
  return v;
}

std::string Multiplier::to_string() const {
  const Multiplier m = normalized();
  std::ostringstream os;
  os << pmech::to_string(m.coeff);
  if (m.pi_power != 0) os << "*pi^" << m.pi_power;
  if (m.i_power != 0) os << "*i";
  if (m.hbar_power != 0) os << "*hbar^" << m.hbar_power;
  return os.str();
}

Multiplier operator*(const Multiplier& a, const Multiplier& b) {
  return Multiplier{a.coeff * b.coeff, a.pi_power + b.pi_power, a.i_power + b.i_power,
                    a.hbar_power + b.hbar_power}
      .normalized();
}

bool Multiplier::operator==(const Multiplier& o) const {
  const Multiplier a = normalized(), b = o.normalized();
  return a.coeff == b.coeff && a.pi_power == b.pi_power && a.i_power == b.i_power &&
         a.hbar_power == b.hbar_power;
}

Multiplier central_derivative_multiplier() { return Multiplier{Rational(2), 1, 1, 1}.normalized(); }
Multiplier antiderivative_multiplier() { return Multiplier{Rational(2), 1, -1, -1}.normalized(); }

ClassicalSymbol classical_antiderivative(const ClassicalSymbol& f) {
  const Multiplier factor{Rational(4) / static_cast<long>(f.s_power + 1), 2, 0, 0};
  return {f.coeff * factor, f.s_power + 1};
}

ClassicalSymbol classical_central_derivative(const ClassicalSymbol& f) {
  if (f.s_power == 0) return {Multiplier{Rational(0)}.normalized(), 0};
  return {f.coeff * Multiplier{Rational(static_cast<long>(f.s_power))}, f.s_power - 1};
}

Multiplier galilean_antiderivative(std::size_t mu, std::size_t dim) {
  if (mu >= dim) throw std::out_of_range("galilean_antiderivative: index out of range");
  return antiderivative_multiplier();
}

std::vector<std::pair<clifford::Multivector<Rational>, Multiplier>> galilean_composite(
    const clifford::MetricPtr& metric) {
  std::vector<std::pair<clifford::Multivector<Rational>, Multiplier>> out;
  for (std::size_t mu = 0; mu < metric->dim(); ++mu)
    out.emplace_back(clifford::generator<Rational>(metric, mu), galilean_antiderivative(mu, metric->dim()));
  return out;
}

clifford::Multivector<Complex> apply_galilean_composite(const clifford::MetricPtr& metric,
                                                        const GalileanCharacter& chr, Complex value) {
  if (chr.hbar.size() != metric->dim())
    throw std::invalid_argument("character needs one frequency per central coordinate");
  clifford::Multivector<Complex> out(metric);
  const auto composite = galilean_composite(metric);
  for (std::size_t mu = 0; mu < composite.size(); ++mu) {
    const Multiplier& mult = composite[mu].second;
    if (chr.hbar[mu] == 0.0) throw std::invalid_argument("hbar_mu = 0 has no multiplier; use ClassicalSymbol");
    out += clifford::generator<Complex>(metric, mu) * (mult.value(chr.hbar[mu]) * value);
  }
  return out;
}

// ---------------------------------------------------------------------------

TwistedKernel kernel_from_symbol(const grid::PhaseGrid& symbol, double hbar) {
  return {hbar, grid::fourier(symbol, +1)};
}

grid::PhaseGrid symbol_from_kernel(const TwistedKernel& k, const grid::Axis& q_axis,
                                   const grid::Axis& p_axis) {
  return grid::fourier(k.samples, -1, q_axis, p_axis);
}

grid::PhaseGrid sample_symbol(const brackets::EnvelopedSymbol& s, const grid::Axis& q_axis,
                              const grid::Axis& p_axis) {
  if (s.n != 1) throw std::invalid_argument("grid symbols support one degree of freedom");
  // Separable evaluation: sum_terms c * q^a * p^b with per-axis power tables.
  const auto real = poly::to_real(s.poly);
  const int dq = std::max(0, s.poly.degree_in(0)), dp = std::max(0, s.poly.degree_in(1));
  auto powers = [](const grid::Axis& ax, int deg) {
    std::vector<double> t(ax.n * static_cast<std::size_t>(deg + 1));
    for (std::size_t i = 0; i < ax.n; ++i) {
      double v = 1.0;
      for (int k = 0; k <= deg; ++k, v *= ax.at(i)) t[i * static_cast<std::size_t>(deg + 1) + static_cast<std::size_t>(k)] = v;
    }
    return t;
  };
  const auto qp = powers(q_axis, dq), pp = powers(p_axis, dp);
  const double a = s.a.get_d();
  grid::PhaseGrid out(q_axis, p_axis);
  const std::size_t wq = static_cast<std::size_t>(dq + 1), wp = static_cast<std::size_t>(dp + 1);
  struct Term {
    std::size_t a, b;
    double c;
  };
  std::vector<Term> flat;
  for (const auto& [e, c] : real.terms()) flat.push_back({e[0], e[1], c});
  for (std::size_t i = 0; i < q_axis.n; ++i)
    for (std::size_t j = 0; j < p_axis.n; ++j) {
      double acc = 0.0;
      for (const auto& t : flat) acc += t.c * qp[i * wq + t.a] * pp[j * wp + t.b];
      const double q = q_axis.at(i), p = p_axis.at(j);
      out(i, j) = acc * std::exp(-a * (q * q + p * p));
    }
  return out;
}

namespace {

struct FitData {
  std::vector<std::vector<double>> terms;  // sampled T_j
  std::vector<double> target;              // Re G
};

std::vector<double> series_at(const FitData& d, double mu) {
  std::vector<double> out(d.target.size(), 0.0);
  double w = 1.0;
  for (const auto& t : d.terms) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * t[k];
    w *= -mu;
  }
  return out;
}

double best_scale(const std::vector<double>& model, const std::vector<double>& target) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    num += model[k] * target[k];
    den += model[k] * model[k];
  }
  return den == 0.0 ? 0.0 : num / den;
}

double max_rel_error(const std::vector<double>& model, double scale, const grid::Grid2D& g) {
  double err = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    err = std::max(err, std::abs(g.values()[k] - Complex(scale * model[k])));
    peak = std::max(peak, std::abs(scale * model[k]));
  }
  return peak == 0.0 ? err : err / peak;
}

double residual(const FitData& d, double mu) {
  const auto model = series_at(d, mu);
  const double c = best_scale(model, d.target);
  double r = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) r += std::pow(d.target[k] - c * model[k], 2);
  return r;
}

}  // namespace

CalibrationReport cross_backend(const brackets::EnvelopedSymbol& f, const brackets::EnvelopedSymbol& g,
                                double hbar, const CalibrationOptions& opt) {
  const auto qa = grid::Axis::centered(opt.half_width, opt.n);
  const auto pa = grid::Axis::centered(opt.half_width, opt.n);
  const TwistedKernel kf = kernel_from_symbol(sample_symbol(f, qa, pa), hbar);
  const TwistedKernel kg = kernel_from_symbol(sample_symbol(g, qa, pa), hbar);
  const grid::PhaseGrid grid_bracket = symbol_from_kernel(ub_bracket_grid(kf, kg, opt.backend), qa, pa);

  FitData data;
  for (const auto& t : brackets::ub_series_terms(f, g, opt.series_terms)) {
    const auto sampled = sample_symbol(t, qa, pa);
    std::vector<double> re(sampled.size());
    for (std::size_t k = 0; k < re.size(); ++k) re[k] = sampled.values()[k].real();
    data.terms.push_back(std::move(re));
  }
  double peak = 0.0, imag = 0.0;
  for (const auto& v : grid_bracket.values()) {
    data.target.push_back(v.real());
    peak = std::max(peak, std::abs(v));
    imag = std::max(imag, std::abs(v.imag()));
  }

  CalibrationReport rep;
  rep.hbar = hbar;
  rep.lambda_expected = brackets::lambda_of_hbar(hbar);
  rep.max_imag = peak == 0.0 ? 0.0 : imag / peak;
  rep.rel_error = max_rel_error(series_at(data, rep.lambda_expected * rep.lambda_expected),
                                rep.scale_expected, grid_bracket);

  // Coarse logarithmic scan for mu = lambda^2, then golden-section refinement.
  double best_mu = 0.0, best_r = residual(data, 0.0);
  const int scan = 241;
  double lo_exp = -8.0, hi_exp = 0.0;
  for (int s = 0; s < scan; ++s) {
    const double mu = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * s / (scan - 1));
    const double r = residual(data, mu);
    if (r < best_r) {
      best_r = r;
      best_mu = mu;
    }
  }
  double a = best_mu / 1.1, b = best_mu * 1.1;
  if (best_mu == 0.0) b = 1e-8;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = residual(data, c), fd = residual(data, d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = residual(data, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = residual(data, d);
    }
  }
  const double mu = (a + b) / 2.0;
  const auto model = series_at(data, mu);
  rep.lambda_fit = std::sqrt(mu);
  rep.scale_fit = best_scale(model, data.target);
  rep.rel_error_fit = max_rel_error(model, rep.scale_fit, grid_bracket);
  return rep;
}

}  // namespace pmech::twisted
