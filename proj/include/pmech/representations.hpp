#pragma once

#include "pmech/grid.hpp"
#include "pmech/groups.hpp"

namespace pmech::representations {

using grid::DerivativeScheme;
using grid::PhaseGrid;
using Element = groups::HeisenbergElement<double>;

class RepresentationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// rho_hbar(s,x,y) f(q,p) = e^{-2 pi i (hbar s + q x + p y)} f(q - hbar y/2, p + hbar x/2)
/// for one degree of freedom. Shifts use the Fourier shift theorem on the periodic
/// window; a shift longer than half the window is rejected as truncation.
PhaseGrid rho_h(double hbar, const Element& g, const PhaseGrid& f);

/// Multiplier e^{-2 pi i (q.x + p.y)} of the one-dimensional representation at (q,p).
Complex rho_classical(std::span<const double> q, std::span<const double> p, const Element& g);

/// Operators of the derived representation, as printed:
///   S -> -2 pi i hbar I,  X -> hbar d/dp + (i/2) q,  Y -> -hbar d/dq + (i/2) p.
/// Their commutator [X, Y] = i hbar I (see derived_commutator_constant).
struct DerivedOps {
  double hbar;
  DerivativeScheme scheme = DerivativeScheme::Spectral;

  PhaseGrid S(const PhaseGrid& f) const;
  PhaseGrid X(const PhaseGrid& f) const;
  PhaseGrid Y(const PhaseGrid& f) const;
};

DerivedOps derived_ops(double hbar, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// c in [dX, dY] f = c hbar f, fitted by least squares over the grid.
Complex derived_commutator_constant(const DerivedOps& ops, const PhaseGrid& f);

/// D f = (hbar/2)(df/dp + i df/dq) + 2 pi (p + i q) f.
PhaseGrid dbar(double hbar, const PhaseGrid& f, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// Discrete L2 norm of dbar(hbar, f); zero exactly on the Fock space (up to grid error).
double fock_residual(double hbar, const PhaseGrid& f, DerivativeScheme scheme = DerivativeScheme::Spectral);

/// e^{-2 pi (q^2 + p^2) / hbar}.
PhaseGrid vacuum(double hbar, const grid::Axis& q_axis, const grid::Axis& p_axis);

/// rho_h(g) applied to the vacuum.
PhaseGrid coherent_state(double hbar, const Element& g, const grid::Axis& q_axis,
                         const grid::Axis& p_axis);

/// rho_hbar(k) f = int k(hbar; x, y) rho_hbar(0, x, y) f dx dy by the rectangle rule over
/// the kernel lattice. The kernel must decay below `decay_threshold` (relative) at the
/// edge of its window.
PhaseGrid rho_of_kernel(const grid::TwistedKernel& k, const PhaseGrid& f,
                        double decay_threshold = 1e-8);

/// Serial oracle for rho_of_kernel.
PhaseGrid rho_of_kernel_reference(const grid::TwistedKernel& k, const PhaseGrid& f);

}  // namespace pmech::representations
