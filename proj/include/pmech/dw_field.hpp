#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmech/clifford.hpp"
#include "pmech/kernels.hpp"
#include "pmech/poly.hpp"
#include "pmech/twisted.hpp"

namespace pmech::dw {

using clifford::MetricPtr;
using Multivector = clifford::Multivector<Rational>;

/// Polynomial in (q, v_0..v_n), v_mu standing for d_mu q. Variable 0 is q, 1+mu is v_mu.
struct LagrangianSpec {
  MetricPtr metric;
  poly::RationalPolynomial L{1};

  /// Variables `q`, `v0`..`vn`.
  static LagrangianSpec parse(std::string_view text, MetricPtr metric);
  /// 1/2 eta^{mu nu} v_mu v_nu - 1/2 m^2 q^2.
  static LagrangianSpec free_scalar(MetricPtr metric, const Rational& mass_squared);
  std::string to_string() const;
};

/// Polynomial in (q, p^0..p^n). Variable 0 is q, 1+mu is p^mu.
struct DWHamiltonian {
  MetricPtr metric;
  poly::RationalPolynomial H{1};

  /// Variables `q`, `p0`..`pn`.
  static DWHamiltonian parse(std::string_view text, MetricPtr metric);
  std::size_t dim() const { return metric->dim(); }
  std::string to_string() const;
  bool operator==(const DWHamiltonian& o) const { return H == o.H; }
};

class LegendreError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LegendreResult {
  /// p^mu = dL/dv_mu as polynomials in (q, v).
  std::vector<poly::RationalPolynomial> momenta;
  /// v_mu(q, p) solving the momentum relations.
  std::vector<poly::RationalPolynomial> velocities;
  DWHamiltonian hamiltonian;
};

/// p^mu = dL/dv_mu, v = v(p), H = p^mu v_mu - L. L must be at most quadratic in v,
/// with a q-independent invertible kinetic form.
LegendreResult dw_legendre(const LagrangianSpec& L);

/// The inverse transform: v_mu = dH/dp^mu, L = p^mu v_mu - H with p = p(v).
LagrangianSpec dw_legendre_inverse(const DWHamiltonian& H);

struct Rhs {
  std::vector<double> dH_dp;  // dH/dp^mu
  double minus_dH_dq = 0.0;
};

/// Right-hand sides of d_mu q = dH/dp^mu and d_mu p^mu = -dH/dq at one site.
Rhs dw_rhs(const DWHamiltonian& H, double q, std::span<const double> p);

/// H = 1/2 sum_mu c_mu (p^mu)^2 + V(q): the shape integrate_dw accepts.
struct KleinGordonForm {
  std::vector<double> c;       // c_mu
  std::vector<double> force;   // V'(q) power series
  std::vector<double> potential;  // V(q) power series
};
KleinGordonForm klein_gordon_form(const DWHamiltonian& H);

/// Scalar field and polymomenta on a spacetime lattice, co-located at the sites.
/// Site index is row-major over the lattice axes (u^0 slowest).
struct DWState {
  MetricPtr metric;
  kernels::Lattice lattice;
  std::vector<double> q;
  std::vector<std::vector<double>> p;  // p[mu][site]

  std::size_t sites() const { return q.size(); }
};

/// q and dq/du^0 on the u^0 = 0 slice (one site for 1+0 dimensions).
struct CauchyData {
  std::vector<double> q;
  std::vector<double> q_dot;
  double h = 1.0;  // spatial step (ignored for 1+0)
};

struct IntegrationOptions {
  double dt = 0.01;
  std::size_t steps = 100;
  bool reference = false;  // use the serial kernel
};

struct IntegrationResult {
  DWState state;               // every time slice 0..steps, co-located fields
  std::vector<double> times;
  std::vector<double> energy;  // discrete conserved energy at half steps
  double max_energy_drift = 0.0;  // relative to |E| at the first half step
  /// max |d_1 q - dH/dp^1| over the run (monitored, not imposed).
  double constraint_residual = 0.0;
};

/// Staggered leapfrog in u^0 for Klein-Gordon-type H, periodic in u^1. 1+0 dimensions
/// reduce to the Stormer-Verlet particle integrator. Requires c_0 c_1 < 0 and
/// dt <= h (CFL) in 1+1 dimensions.
IntegrationResult integrate_dw(const DWHamiltonian& H, const CauchyData& data,
                               const IntegrationOptions& options);

/// Exact plane wave q = cos(k u^1 - omega u^0) with omega^2 = k^2 + m^2 for the free
/// 1+1 field of mass^2 m2, sampled with p^mu = (d_mu q) / c_mu. Periodic length 2 pi m / k.
DWState plane_wave_state(const DWHamiltonian& H, double k, std::size_t n_time, std::size_t n_space,
                         double dt, int periods_in_box = 1);

/// Angular frequency of the spatial Fourier mode `mode` from the unwrapped phase of its
/// amplitude over the recorded slices (least-squares slope, sign chosen positive).
double measure_frequency(const IntegrationResult& run, std::size_t mode);

/// Dispersion relation of the staggered scheme for H = 1/2 (c0 (p^0)^2 + c1 (p^1)^2) + m2 q^2 / 2:
///   (2/dt sin(w dt/2))^2 = c0 (m2 - (2/h sin(kh/2))^2 / c1).
/// Continuum limit: w^2 = c0 (m2 - k^2 / c1).
double discrete_frequency(double k, double mass_squared, double dt, double h, double c0 = 1.0,
                          double c1 = -1.0);

// ---------------------------------------------------------------------------
// Clifford-valued observables

using CliffordPolyObservable = poly::Polynomial<Multivector>;

CliffordPolyObservable promote(const DWHamiltonian& H);
/// The observable q with unit scalar coefficient.
CliffordPolyObservable field_q(const MetricPtr& metric);
/// Combined polymomenta e_nu p^nu.
CliffordPolyObservable combined_momentum(const MetricPtr& metric);

/// sum_mu (dk1/dq) e^mu (dk2/dp^mu) - (dk1/dp^mu) e^mu (dk2/dq), coefficient order kept.
CliffordPolyObservable clifford_field_bracket(const CliffordPolyObservable& k1,
                                              const CliffordPolyObservable& k2,
                                              const MetricPtr& metric);

clifford::Multivector<double> evaluate(const CliffordPolyObservable& k, std::span<const double> point,
                                       const MetricPtr& metric);

/// -1/2 (e^mu d_mu f + d_mu f e^mu) with central differences, at every interior site
/// (boundary sites left zero).
std::vector<clifford::Multivector<double>> dirac_pairing(std::span<const clifford::Multivector<double>> f,
                                                         const kernels::Lattice& lattice,
                                                         const MetricPtr& metric, bool reference = false);
/// Same at a single site; throws on boundary sites.
clifford::Multivector<double> dirac_pairing_at(std::span<const clifford::Multivector<double>> f,
                                               const kernels::Lattice& lattice, const MetricPtr& metric,
                                               std::size_t site);

struct ComponentCheck {
  std::string name;
  std::optional<double> kappa;   // least-squares LHS / RHS
  double kappa_expected = 1.0;
  double ratio_variance = 0.0;   // variance of pointwise LHS / RHS over well-conditioned sites
  double max_residual = 0.0;     // max |LHS - kappa * RHS|
  std::size_t sites_used = 0;
};

struct ReductionReport {
  /// One entry per e^mu component of the q equation, then the scalar momentum equation.
  std::vector<ComponentCheck> components;
  /// Single constant relating LHS and RHS of the q equation across all mu.
  std::optional<double> kappa_q;
  double max_ratio_variance() const;
};

/// Checks, at every interior site, that Dirac pairing of q matches {H, q} per e^mu
/// component and that Dirac pairing of e_nu p^nu matches {H, e_nu p^nu}, reporting the
/// constants relating the two sides and their spread over sites.
ReductionReport verify_field_reduction(const DWHamiltonian& H, const DWState& state);

using twisted::galilean_antiderivative;
using twisted::galilean_composite;

}  // namespace pmech::dw
