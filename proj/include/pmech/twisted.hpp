#pragma once

#include <string>
#include <vector>

#include "pmech/brackets.hpp"
#include "pmech/clifford.hpp"
#include "pmech/grid.hpp"

namespace pmech::twisted {

using grid::TwistedKernel;

enum class Backend { Parallel, Reference };

/// Group convolution in partial-Fourier form at fixed hbar:
///   (k1 * k2)(x,y) = int e^{i pi hbar (x y' - y x')} k1(x',y') k2(x-x', y-y') dx'dy'.
TwistedKernel twisted_convolution(const TwistedKernel& k1, const TwistedKernel& k2,
                                  Backend backend = Backend::Parallel);

/// k1 * k2 - k2 * k1: the same integral with kernel 2i sin(pi hbar (xy' - yx')).
TwistedKernel commutator_bracket_grid(const TwistedKernel& k1, const TwistedKernel& k2,
                                      Backend backend = Backend::Parallel);

/// The bracket with kernel (2 pi / hbar) sin(pi hbar (xy' - yx')), evaluated as two
/// chirp-modulated FFT convolutions.
TwistedKernel ub_bracket_grid(const TwistedKernel& k1, const TwistedKernel& k2,
                              Backend backend = Backend::Parallel);

/// Antiderivative on an hbar-character: multiplication by 2 pi / (i hbar).
TwistedKernel antiderivative(const TwistedKernel& k);

/// Exact constant  coeff * pi^pi_power * i^i_power * hbar^hbar_power.
struct Multiplier {
  Rational coeff{1};
  int pi_power = 0;
  int i_power = 0;
  int hbar_power = 0;

  Multiplier normalized() const;
  Complex value(double hbar) const;
  std::string to_string() const;
  friend Multiplier operator*(const Multiplier& a, const Multiplier& b);
  bool operator==(const Multiplier& o) const;
};

/// Multiplier of the central vector field S = d/ds on e^{2 pi i hbar s}: 2 pi i hbar.
Multiplier central_derivative_multiplier();
/// Multiplier of the antiderivative on e^{2 pi i hbar s}: 2 pi / (i hbar).
Multiplier antiderivative_multiplier();

/// hbar = 0 branch: c * s^k, the image of the trivial character under the formal antiderivative.
struct ClassicalSymbol {
  Multiplier coeff;
  unsigned s_power = 0;
  bool operator==(const ClassicalSymbol&) const = default;
};
/// s^k -> 4 pi^2 s^{k+1} / (k+1).
ClassicalSymbol classical_antiderivative(const ClassicalSymbol& f);
/// d/ds.
ClassicalSymbol classical_central_derivative(const ClassicalSymbol& f);

/// Componentwise antiderivative of the Galilean group: acts on the s_mu slot only.
struct GalileanCharacter {
  std::vector<double> hbar;  // one frequency per central coordinate s_mu
};
/// Multiplier of A_mu on the character e^{2 pi i hbar_mu s_mu}; other slots untouched.
Multiplier galilean_antiderivative(std::size_t mu, std::size_t dim);
/// A = e^mu A_mu as a list of (e^mu, multiplier of A_mu).
std::vector<std::pair<clifford::Multivector<Rational>, Multiplier>> galilean_composite(
    const clifford::MetricPtr& metric);
/// A applied to a scalar kernel value carrying the character `chr`.
clifford::Multivector<Complex> apply_galilean_composite(const clifford::MetricPtr& metric,
                                                        const GalileanCharacter& chr, Complex value);

// ---------------------------------------------------------------------------
// Symbol <-> kernel and cross-backend calibration

/// Kernel k(x,y) = int a(q,p) e^{2 pi i (qx + py)} dq dp of a sampled symbol.
TwistedKernel kernel_from_symbol(const grid::PhaseGrid& symbol, double hbar);
/// Symbol a(q,p) = int k(x,y) e^{-2 pi i (qx + py)} dx dy on the given axes.
grid::PhaseGrid symbol_from_kernel(const TwistedKernel& k, const grid::Axis& q_axis,
                                   const grid::Axis& p_axis);

grid::PhaseGrid sample_symbol(const brackets::EnvelopedSymbol& s, const grid::Axis& q_axis,
                              const grid::Axis& p_axis);

struct CalibrationReport {
  double hbar = 0.0;
  double lambda_expected = 0.0;   // hbar / (4 pi)
  double scale_expected = 0.5;    // grid bracket / symbol bracket
  double lambda_fit = 0.0;
  double scale_fit = 0.0;
  double rel_error = 0.0;         // grid vs symbol bracket at the expected constants
  double rel_error_fit = 0.0;     // at the fitted constants
  double max_imag = 0.0;          // relative imaginary part of the grid result
};

struct CalibrationOptions {
  double half_width = 6.0;
  std::size_t n = 256;
  std::size_t series_terms = 12;
  Backend backend = Backend::Parallel;
};

/// Runs f, g through both backends and compares the grid bracket (after the inverse
/// symbol transform) with the sine series sum_j (-lambda^2)^j T_j of the symbolic
/// backend. Fits lambda and the overall scale independently.
CalibrationReport cross_backend(const brackets::EnvelopedSymbol& f, const brackets::EnvelopedSymbol& g,
                                double hbar, const CalibrationOptions& options = {});

}  // namespace pmech::twisted
