#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pmech/poly.hpp"

namespace pmech::brackets {

/// Exact polynomial phase-space observable in q_1..q_n, p_1..p_n with rational
/// coefficients, graded by a formal deformation symbol `h`.
///
/// In the symbolic backend `h` stands for the deformation parameter
/// lambda = hbar / (4 pi); numeric evaluation at a physical hbar substitutes
/// h -> hbar / (4 pi). Variable layout: q_j -> j, p_j -> n + j, h -> 2n.
class Observable {
 public:
  explicit Observable(std::size_t n) : n_(n), poly_(2 * n + 1) { check_n(); }
  Observable(std::size_t n, poly::RationalPolynomial p);

  static Observable constant(std::size_t n, const Rational& c);
  static Observable q(std::size_t n, std::size_t j = 0);
  static Observable p(std::size_t n, std::size_t j = 0);
  static Observable h(std::size_t n);

  /// Variables: `q`, `p` (n = 1) or `q1..qn`, `p1..pn` (1-based), and `h`.
  static Observable parse(std::string_view text, std::size_t n);

  std::size_t n() const { return n_; }
  const poly::RationalPolynomial& poly() const { return poly_; }
  std::size_t q_var(std::size_t j) const { return j; }
  std::size_t p_var(std::size_t j) const { return n_ + j; }
  std::size_t h_var() const { return 2 * n_; }

  bool is_zero() const { return poly_.is_zero(); }
  /// Total degree in the phase-space variables (h excluded); -1 for zero.
  int degree() const;
  int h_degree() const { return poly_.degree_in(h_var()); }

  /// Coefficient of h^k, returned as an h-free observable.
  Observable h_part(unsigned k) const;
  /// Multiplies by h^k.
  Observable times_h(unsigned k) const;
  /// Numeric image with h replaced by `lambda` (h exponent cleared).
  poly::RealPolynomial at_lambda(double lambda) const;

  std::vector<std::string> variable_names() const;
  std::string to_string() const;

  Observable& operator+=(const Observable& o);
  Observable& operator-=(const Observable& o);
  friend Observable operator+(Observable a, const Observable& b) { return a += b; }
  friend Observable operator-(Observable a, const Observable& b) { return a -= b; }
  friend Observable operator-(const Observable& a) { return Observable(a.n_, -a.poly_); }
  friend Observable operator*(const Observable& a, const Observable& b);
  friend Observable operator*(const Rational& s, const Observable& a) {
    return Observable(a.n_, a.poly_.scaled_left(s));
  }
  bool operator==(const Observable& o) const { return n_ == o.n_ && poly_ == o.poly_; }

 private:
  void check_n() const;
  void check_same(const Observable& o) const;

  std::size_t n_;
  poly::RationalPolynomial poly_;
};

}  // namespace pmech::brackets
