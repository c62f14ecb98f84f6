#pragma once

#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "pmech/observable.hpp"

namespace pmech::brackets {

/// Symbol-level deformation parameter for a physical hbar. Derived by carrying the
/// twisted-convolution phase e^{i pi hbar (xy' - yx')} through the symbol transform
/// a(q,p) = \int k(x,y) e^{-2 pi i (qx + py)} dx dy, and confirmed numerically by
/// the cross-backend calibration (see twisted.hpp).
inline double lambda_of_hbar(double hbar) { return hbar / (4.0 * std::numbers::pi); }

/// {f, g} = sum_j df/dq_j dg/dp_j - df/dp_j dg/dq_j, exact. h is a passive coefficient.
Observable poisson_bracket(const Observable& f, const Observable& g);

/// k-th power of the symplectic bidifferential
///   Lambda = sum_j (left d/dq_j)(right d/dp_j) - (left d/dp_j)(right d/dq_j)
/// as a map (left derivative orders, right derivative orders) -> coefficient.
/// Orders are indexed like the phase-space variables (q_1..q_n, p_1..p_n).
class BidifferentialPower {
 public:
  using Orders = std::vector<unsigned>;
  using Key = std::pair<Orders, Orders>;

  BidifferentialPower(std::size_t n, unsigned k);

  std::size_t n() const { return n_; }
  unsigned power() const { return k_; }
  const std::map<Key, Rational>& terms() const { return terms_; }

 private:
  std::size_t n_;
  unsigned k_;
  std::map<Key, Rational> terms_;
};

/// f Lambda^k g, exact.
Observable apply_bidifferential(const Observable& f, const Observable& g,
                                const BidifferentialPower& power);

/// Formal star product f exp(h Lambda) g = sum_k h^k/k! f Lambda^k g (terminating).
/// The Moyal product is the image under h -> i h.
Observable star_product(const Observable& f, const Observable& g);

/// The bracket (1/h) sin(h Lambda) in symbol form:
///   sum_{j>=0} (-1)^j h^{2j} / (2j+1)! f Lambda^{2j+1} g,
/// exact with formal h. Its h^0 part is the Poisson bracket.
Observable ub_bracket_poly(const Observable& f, const Observable& g);

/// ub_bracket_poly evaluated at a physical hbar (h -> hbar / 4 pi). hbar = 0
/// gives the Poisson bracket exactly.
poly::RealPolynomial ub_bracket_at(const Observable& f, const Observable& g, double hbar);

/// Polynomial times Gaussian envelope: poly(q,p) * exp(-a * sum_j (q_j^2 + p_j^2)).
/// `poly` has 2n variables (no h). Derivatives stay in this class.
struct EnvelopedSymbol {
  std::size_t n = 1;
  poly::RationalPolynomial poly{2};
  Rational a{0};

  EnvelopedSymbol derivative(std::size_t var, unsigned order = 1) const;
  EnvelopedSymbol derivative(const std::vector<unsigned>& orders) const;
  friend EnvelopedSymbol operator*(const EnvelopedSymbol& x, const EnvelopedSymbol& y);
  double value(std::span<const double> point) const;
};

/// f Lambda^k g for enveloped symbols (not normalised by k!).
EnvelopedSymbol apply_bidifferential(const EnvelopedSymbol& f, const EnvelopedSymbol& g,
                                     const BidifferentialPower& power);

/// Terms T_j = f Lambda^{2j+1} g / (2j+1)! of the sine series for enveloped symbols,
/// j = 0..count-1. The bracket at deformation lambda is sum_j (-1)^j lambda^{2j} T_j.
std::vector<EnvelopedSymbol> ub_series_terms(const EnvelopedSymbol& f, const EnvelopedSymbol& g,
                                             std::size_t count);

}  // namespace pmech::brackets
