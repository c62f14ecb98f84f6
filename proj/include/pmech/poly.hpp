#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmech/rational.hpp"

namespace pmech::poly {

using Exponents = std::vector<std::uint16_t>;

namespace detail {
template <class C>
bool coeff_is_zero(const C& c) {
  using pmech::is_zero;
  return is_zero(c);
}

template <class C>
C times_int(const C& c, long k) {
  if constexpr (requires { typename C::Scalar; }) {
    return c * typename C::Scalar(k);
  } else {
    return C(c * C(k));
  }
}
}  // namespace detail

/// Sparse polynomial in a fixed number of commuting variables. Coefficients may be
/// noncommutative (e.g. multivectors); products keep left-to-right coefficient order.
/// Canonical form: no stored zero coefficients.
template <class C>
class Polynomial {
 public:
  using Coeff = C;
  using TermMap = std::map<Exponents, C>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial monomial(std::size_t nvars, Exponents exps, const C& c) {
    Polynomial p(nvars);
    p.add_term(std::move(exps), c);
    return p;
  }
  static Polynomial constant(std::size_t nvars, const C& c) {
    return monomial(nvars, Exponents(nvars, 0), c);
  }
  /// The single variable x_index with coefficient `one`.
  static Polynomial variable(std::size_t nvars, std::size_t index, const C& one) {
    Exponents e(nvars, 0);
    e.at(index) = 1;
    return monomial(nvars, std::move(e), one);
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Exponents exps, const C& c) {
    if (exps.size() != nvars_) throw std::invalid_argument("exponent vector length mismatch");
    if (detail::coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(exps), c);
    if (!inserted) {
      it->second += c;
      if (detail::coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  std::optional<C> coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, C(-c));
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial out(a.nvars_);
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, C(-c));
    return out;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_vars(b);
    Polynomial out(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
        out.add_term(e, C(ca * cb));
      }
    return out;
  }

  /// Coefficient-wise left scaling c * p.
  Polynomial scaled_left(const C& s) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, C(s * c));
    return out;
  }
  /// Coefficient-wise right scaling p * c.
  Polynomial scaled_right(const C& s) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, C(c * s));
    return out;
  }

  Polynomial derivative(std::size_t var, unsigned order = 1) const {
    if (var >= nvars_) throw std::out_of_range("derivative variable out of range");
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] < order) continue;
      long factor = 1;
      for (unsigned k = 0; k < order; ++k) factor *= static_cast<long>(e[var] - k);
      Exponents d = e;
      d[var] = static_cast<std::uint16_t>(d[var] - order);
      out.add_term(std::move(d), detail::times_int(c, factor));
    }
    return out;
  }

  /// Mixed derivative prod_i d^{orders[i]}/dx_i^{orders[i]}.
  Polynomial derivative(std::span<const unsigned> orders) const {
    Polynomial out = *this;
    for (std::size_t v = 0; v < orders.size() && !out.is_zero(); ++v)
      if (orders[v] != 0) out = out.derivative(v, orders[v]);
    return out;
  }

  /// Highest total degree over the selected variables (all if mask empty); -1 for zero.
  int total_degree(const std::vector<bool>& mask = {}) const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (mask.empty() || mask[i]) d += e[i];
      best = std::max(best, d);
    }
    return best;
  }

  int degree_in(std::size_t var) const {
    int best = -1;
    for (const auto& [e, c] : terms_) best = std::max(best, static_cast<int>(e.at(var)));
    return best;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    Polynomial<D> out(nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  void check_vars(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomials over different variable sets");
  }

 private:
  std::size_t nvars_;
  TermMap terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using RealPolynomial = Polynomial<double>;

/// Evaluates a scalar-coefficient polynomial at a point.
template <class C>
double evaluate(const Polynomial<C>& p, std::span<const double> point) {
  if (point.size() != p.nvars()) throw std::invalid_argument("evaluation point has wrong length");
  double acc = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double term = scalar_from<double>(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= std::pow(point[i], static_cast<int>(e[i]));
    acc += term;
  }
  return acc;
}

template <>
inline double evaluate(const Polynomial<double>& p, std::span<const double> point) {
  if (point.size() != p.nvars()) throw std::invalid_argument("evaluation point has wrong length");
  double acc = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= std::pow(point[i], static_cast<int>(e[i]));
    acc += term;
  }
  return acc;
}

RealPolynomial to_real(const RationalPolynomial& p);

/// Substitutes variable `var` := value and drops it from the exponent (set to 0).
RealPolynomial substitute(const RationalPolynomial& p, std::size_t var, double value);

/// Euclidean norm of the coefficient vector.
double coefficient_norm(const RealPolynomial& p);

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Maps an identifier to a variable index, or nullopt if unknown.
using VariableResolver = std::function<std::optional<std::size_t>(std::string_view)>;

/// Parses the monomial grammar: sums/differences of products of rational numbers,
/// variables, integer powers and parenthesised subexpressions, e.g.
/// "3*q1^2*p1 - 1/2*h^2" or "(p^2 + q^2)/2". Division only by constants.
RationalPolynomial parse_polynomial(std::string_view text, std::size_t nvars,
                                    const VariableResolver& resolve);

/// Prints terms in descending total degree; names[i] labels variable i.
std::string format_polynomial(const RationalPolynomial& p, std::span<const std::string> names);
std::string format_polynomial(const RealPolynomial& p, std::span<const std::string> names);

}  // namespace pmech::poly
