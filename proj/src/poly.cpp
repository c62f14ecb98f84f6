#include "pmech/poly.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

namespace pmech::poly {

RealPolynomial to_real(const RationalPolynomial& p) {
  return p.map_coefficients([](const Rational& c) { return c.get_d(); });
}

RealPolynomial substitute(const RationalPolynomial& p, std::size_t var, double value) {
  RealPolynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    Exponents r = e;
    const int k = r.at(var);
    r[var] = 0;
    out.add_term(std::move(r), c.get_d() * std::pow(value, k));
  }
  return out;
}

double coefficient_norm(const RealPolynomial& p) {
  double acc = 0.0;
  for (const auto& [e, c] : p.terms()) acc += c * c;
  return std::sqrt(acc);
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t nvars, const VariableResolver& resolve)
      : text_(text), nvars_(nvars), resolve_(resolve) {}

  RationalPolynomial parse() {
    RationalPolynomial out = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" +
                     std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalPolynomial expr() {
    RationalPolynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RationalPolynomial term() {
    RationalPolynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        RationalPolynomial d = unary();
        const Exponents zero(nvars_, 0);
        if (d.size() != 1 || !d.coefficient(zero)) fail("division by a non-constant");
        acc = acc.scaled_right(Rational(1) / *d.coefficient(zero));
      } else {
        return acc;
      }
    }
  }

  RationalPolynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalPolynomial power() {
    RationalPolynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      const int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      RationalPolynomial out = RationalPolynomial::constant(nvars_, Rational(1));
      for (int i = 0; i < k; ++i) out = out * base;
      return out;
    }
    return base;
  }

  RationalPolynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalPolynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      return RationalPolynomial::constant(nvars_, parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      const auto idx = resolve_(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return RationalPolynomial::variable(nvars_, *idx, Rational(1));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t nvars_;
  const VariableResolver& resolve_;
  std::size_t pos_ = 0;
};

template <class C>
std::vector<const typename Polynomial<C>::TermMap::value_type*> display_order(
    const Polynomial<C>& p) {
  std::vector<const typename Polynomial<C>::TermMap::value_type*> terms;
  for (const auto& t : p.terms()) terms.push_back(&t);
  std::stable_sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) {
    int da = 0, db = 0;
    for (auto v : a->first) da += v;
    for (auto v : b->first) db += v;
    if (da != db) return da > db;
    return a->first > b->first;
  });
  return terms;
}

std::string monomial_text(const Exponents& e, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

template <class C, class ToText, class IsNeg, class Abs, class IsOne>
std::string format_impl(const Polynomial<C>& p, std::span<const std::string> names,
                        ToText to_text, IsNeg is_neg, Abs abs_of, IsOne is_one) {
  if (names.size() != p.nvars()) throw std::invalid_argument("wrong number of variable names");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto* t : display_order(p)) {
    const bool neg = is_neg(t->second);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    const C mag = abs_of(t->second);
    const std::string mono = monomial_text(t->first, names);
    if (mono.empty()) {
      out += to_text(mag);
    } else if (is_one(mag)) {
      out += mono;
    } else {
      out += to_text(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace

RationalPolynomial parse_polynomial(std::string_view text, std::size_t nvars,
                                    const VariableResolver& resolve) {
  return Parser(text, nvars, resolve).parse();
}

std::string format_polynomial(const RationalPolynomial& p, std::span<const std::string> names) {
  return format_impl(
      p, names, [](const Rational& c) { return c.get_str(); },
      [](const Rational& c) { return sgn(c) < 0; }, [](const Rational& c) { return Rational(abs(c)); },
      [](const Rational& c) { return c == 1; });
}

std::string format_polynomial(const RealPolynomial& p, std::span<const std::string> names) {
  return format_impl(
      p, names,
      [](double c) {
        std::ostringstream os;
        os << std::setprecision(17) << c;
        return os.str();
      },
      [](double c) { return c < 0; }, [](double c) { return std::abs(c); },
      [](double c) { return c == 1.0; });
}

}  // namespace pmech::poly
