#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmech/observable.hpp"

namespace pmech::dynamics {

using brackets::Observable;

/// Polynomial Hamiltonian H(q, p) with n degrees of freedom. An `h` in H is set to 0
/// for classical evolution and to lambda(hbar) for the deformed flow.
struct HamiltonianSpec {
  Observable H;
  std::size_t n() const { return H.n(); }
};

enum class Integrator { RK4, Leapfrog };

std::string to_string(Integrator integrator);

/// Thrown when the state stops being finite.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(std::size_t step, double time);
  std::size_t step;
  double time;
};

class TruncationRequired : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Trajectory {
  Integrator integrator = Integrator::RK4;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> p;
  std::vector<double> energy;
  /// max_t |H(t) - H(0)|.
  double max_energy_drift = 0.0;
};

/// Hamilton's equations q' = dH/dp, p' = -dH/dq, i.e. f' = {f, H}.
/// RK4 for any H; Leapfrog (Stormer-Verlet) needs H = T(p) + V(q).
/// The last step is shortened so that the final record sits at t_end exactly.
Trajectory evolve_classical(const HamiltonianSpec& H, const std::vector<double>& q0,
                            const std::vector<double>& p0, double t_end, double dt,
                            Integrator integrator = Integrator::RK4, std::size_t record_every = 1);

/// Monomial basis of total degree <= max_degree in 2n phase-space variables.
std::vector<poly::Exponents> monomial_basis(std::size_t n, int max_degree);

struct ObservableTrajectory {
  double hbar = 0.0;
  double dt = 0.0;
  int truncation = 0;
  std::vector<poly::Exponents> basis;
  std::vector<double> times;
  /// Coefficients on `basis` at each recorded time.
  std::vector<std::vector<double>> coefficients;

  poly::RealPolynomial snapshot(std::size_t k) const;
};

/// f' = ub(f, H) at lambda = hbar / (4 pi), in the coefficient space of monomials of
/// degree <= truncation, stepped with RK4. For deg H <= 2 the space of degree <= deg f0
/// is invariant and no truncation is needed; otherwise `truncation` must be given.
ObservableTrajectory evolve_observable_moyal(const HamiltonianSpec& H, const Observable& f0, double hbar,
                                             double t_end, double dt,
                                             std::optional<int> truncation = std::nullopt,
                                             std::size_t record_every = 0);

struct GapTable {
  std::vector<double> hbar;
  std::vector<double> gap;
  /// |gap(D) - gap(D + 2)| / max(gap(D), tiny) per entry: truncation stability.
  std::vector<double> truncation_change;
  /// Least-squares slope of log gap vs log hbar over entries with hbar > 0, gap > 0.
  std::optional<double> slope;
};

/// Coefficient-space norm of (deformed - classical) evolutions of f0 at time t.
/// hbar entries are evaluated in parallel; results do not depend on the thread count.
GapTable moyal_vs_poisson_gap(const HamiltonianSpec& H, const Observable& f0,
                              const std::vector<double>& hbar_list, double t, double dt,
                              std::optional<int> truncation = std::nullopt);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pmech::dynamics
