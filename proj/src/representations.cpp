#include "pmech/representations.hpp"

#include <cmath>
#include <numbers>

#include "pmech/kernels.hpp"

namespace pmech::representations {

namespace {

constexpr double kPi = std::numbers::pi;

void check_hbar(double hbar) {
  if (hbar == 0.0 || !std::isfinite(hbar))
    throw RepresentationError("hbar must be finite and nonzero (use rho_classical for hbar = 0)");
}

void check_shift(double delta, const grid::Axis& axis, const char* which) {
  if (std::abs(delta) > axis.length() / 2.0)
    throw RepresentationError(std::string("shift along ") + which +
                              " exceeds half the grid window (truncation)");
}

PhaseGrid multiply_coordinate(const PhaseGrid& f, int axis, Complex factor) {
  PhaseGrid out = f;
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j)
      out(i, j) *= factor * (axis == 0 ? f.axis0().at(i) : f.axis1().at(j));
  return out;
}

}  // namespace

PhaseGrid rho_h(double hbar, const Element& g, const PhaseGrid& f) {
  check_hbar(hbar);
  if (g.n() != 1 || g.y.size() != 1) throw groups::DimensionError("rho_h: grid backend supports n = 1");
  const double x = g.x[0], y = g.y[0];
  const double dq = -hbar * y / 2.0, dp = hbar * x / 2.0;
  check_shift(dq, f.axis0(), "q");
  check_shift(dp, f.axis1(), "p");
  PhaseGrid out = grid::shift(grid::shift(f, 0, dq), 1, dp);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) *= std::polar(1.0, -2.0 * kPi * (hbar * g.s + f.axis0().at(i) * x + f.axis1().at(j) * y));
  return out;
}

Complex rho_classical(std::span<const double> q, std::span<const double> p, const Element& g) {
  groups::check_shape(g);
  if (q.size() != g.n() || p.size() != g.n()) throw groups::DimensionError("rho_classical: dimension mismatch");
  double phase = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) phase += q[j] * g.x[j] + p[j] * g.y[j];
  return std::polar(1.0, -2.0 * kPi * phase);
}

PhaseGrid DerivedOps::S(const PhaseGrid& f) const {
  return Complex(0.0, -2.0 * kPi * hbar) * f;
}

PhaseGrid DerivedOps::X(const PhaseGrid& f) const {
  PhaseGrid out = Complex(hbar) * grid::derivative(f, 1, scheme);
  out += multiply_coordinate(f, 0, Complex(0.0, 0.5));
  return out;
}

PhaseGrid DerivedOps::Y(const PhaseGrid& f) const {
  PhaseGrid out = Complex(-hbar) * grid::derivative(f, 0, scheme);
  out += multiply_coordinate(f, 1, Complex(0.0, 0.5));
  return out;
}

DerivedOps derived_ops(double hbar, DerivativeScheme scheme) {
  check_hbar(hbar);
  return {hbar, scheme};
}

Complex derived_commutator_constant(const DerivedOps& ops, const PhaseGrid& f) {
  const PhaseGrid comm = ops.X(ops.Y(f)) - ops.Y(ops.X(f));
  Complex num{};
  double den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    num += std::conj(f.values()[k]) * comm.values()[k];
    den += std::norm(f.values()[k]);
  }
  if (den == 0.0) throw RepresentationError("commutator constant needs a nonzero test function");
  return num / (den * ops.hbar);
}

PhaseGrid dbar(double hbar, const PhaseGrid& f, DerivativeScheme scheme) {
  PhaseGrid out = grid::derivative(f, 1, scheme);
  out += Complex(0.0, 1.0) * grid::derivative(f, 0, scheme);
  out *= hbar / 2.0;
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j)
      out(i, j) += 2.0 * kPi * Complex(f.axis1().at(j), f.axis0().at(i)) * f(i, j);
  return out;
}

double fock_residual(double hbar, const PhaseGrid& f, DerivativeScheme scheme) {
  if (!(hbar > 0.0)) throw RepresentationError("Fock residual needs hbar > 0");
  return grid::l2_norm(dbar(hbar, f, scheme));
}

PhaseGrid vacuum(double hbar, const grid::Axis& q_axis, const grid::Axis& p_axis) {
  if (!(hbar > 0.0)) throw RepresentationError("vacuum needs hbar > 0");
  return grid::sample(q_axis, p_axis, [hbar](double q, double p) {
    return Complex(std::exp(-2.0 * kPi * (q * q + p * p) / hbar));
  });
}

PhaseGrid coherent_state(double hbar, const Element& g, const grid::Axis& q_axis,
                         const grid::Axis& p_axis) {
  return rho_h(hbar, g, vacuum(hbar, q_axis, p_axis));
}

namespace {

void check_kernel(const grid::TwistedKernel& k, const PhaseGrid& f, double threshold) {
  check_hbar(k.hbar);
  grid::check_decay(k.samples, threshold, "rho_of_kernel");
  const double peak = grid::max_abs(k.samples);
  for (std::size_t a = 0; a < k.samples.rows(); ++a)
    for (std::size_t b = 0; b < k.samples.cols(); ++b) {
      if (std::abs(k.samples(a, b)) <= threshold * peak) continue;
      check_shift(k.hbar * k.samples.axis1().at(b) / 2.0, f.axis0(), "q");
      check_shift(k.hbar * k.samples.axis0().at(a) / 2.0, f.axis1(), "p");
    }
}

}  // namespace

PhaseGrid rho_of_kernel(const grid::TwistedKernel& k, const PhaseGrid& f, double decay_threshold) {
  check_kernel(k, f, decay_threshold);
  return kernels::parallel::kernel_action(k.hbar, k.samples, f);
}

PhaseGrid rho_of_kernel_reference(const grid::TwistedKernel& k, const PhaseGrid& f) {
  check_hbar(k.hbar);
  return kernels::reference::kernel_action(k.hbar, k.samples, f);
}

}  // namespace pmech::representations
