#include "pmech/observable.hpp"

#include <charconv>
#include <stdexcept>

namespace pmech::brackets {

Observable::Observable(std::size_t n, poly::RationalPolynomial p) : n_(n), poly_(std::move(p)) {
  check_n();
  if (poly_.nvars() != 2 * n_ + 1)
    throw std::invalid_argument("observable polynomial has wrong variable count");
}

void Observable::check_n() const {
  if (n_ == 0) throw std::invalid_argument("observable needs n >= 1 degrees of freedom");
}

void Observable::check_same(const Observable& o) const {
  if (n_ != o.n_) throw std::invalid_argument("observables with different n");
}

Observable Observable::constant(std::size_t n, const Rational& c) {
  return Observable(n, poly::RationalPolynomial::constant(2 * n + 1, c));
}
Observable Observable::q(std::size_t n, std::size_t j) {
  if (j >= n) throw std::out_of_range("q index out of range");
  return Observable(n, poly::RationalPolynomial::variable(2 * n + 1, j, Rational(1)));
}
Observable Observable::p(std::size_t n, std::size_t j) {
  if (j >= n) throw std::out_of_range("p index out of range");
  return Observable(n, poly::RationalPolynomial::variable(2 * n + 1, n + j, Rational(1)));
}
Observable Observable::h(std::size_t n) {
  return Observable(n, poly::RationalPolynomial::variable(2 * n + 1, 2 * n, Rational(1)));
}

Observable Observable::parse(std::string_view text, std::size_t n) {
  const poly::VariableResolver resolve = [n](std::string_view name) -> std::optional<std::size_t> {
    if (name == "h") return 2 * n;
    if (name.empty() || (name[0] != 'q' && name[0] != 'p')) return std::nullopt;
    const std::size_t base = name[0] == 'q' ? 0 : n;
    if (name.size() == 1) {
      if (n == 1) return base;
      return std::nullopt;
    }
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
    if (ec != std::errc{} || ptr != name.data() + name.size() || idx < 1 || idx > n)
      return std::nullopt;
    return base + idx - 1;
  };
  return Observable(n, poly::parse_polynomial(text, 2 * n + 1, resolve));
}

int Observable::degree() const {
  std::vector<bool> mask(2 * n_ + 1, true);
  mask[h_var()] = false;
  return poly_.total_degree(mask);
}

Observable Observable::h_part(unsigned k) const {
  poly::RationalPolynomial out(poly_.nvars());
  for (const auto& [e, c] : poly_.terms()) {
    if (e[h_var()] != k) continue;
    poly::Exponents r = e;
    r[h_var()] = 0;
    out.add_term(std::move(r), c);
  }
  return Observable(n_, std::move(out));
}

Observable Observable::times_h(unsigned k) const {
  poly::RationalPolynomial out(poly_.nvars());
  for (const auto& [e, c] : poly_.terms()) {
    poly::Exponents r = e;
    r[h_var()] = static_cast<std::uint16_t>(r[h_var()] + k);
    out.add_term(std::move(r), c);
  }
  return Observable(n_, std::move(out));
}

poly::RealPolynomial Observable::at_lambda(double lambda) const {
  return poly::substitute(poly_, h_var(), lambda);
}

std::vector<std::string> Observable::variable_names() const {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < n_; ++j) names.push_back(n_ == 1 ? "q" : "q" + std::to_string(j + 1));
  for (std::size_t j = 0; j < n_; ++j) names.push_back(n_ == 1 ? "p" : "p" + std::to_string(j + 1));
  names.push_back("h");
  return names;
}

std::string Observable::to_string() const {
  const auto names = variable_names();
  return poly::format_polynomial(poly_, names);
}

Observable& Observable::operator+=(const Observable& o) {
  check_same(o);
  poly_ += o.poly_;
  return *this;
}
Observable& Observable::operator-=(const Observable& o) {
  check_same(o);
  poly_ -= o.poly_;
  return *this;
}
Observable operator*(const Observable& a, const Observable& b) {
  a.check_same(b);
  return Observable(a.n_, a.poly_ * b.poly_);
}

}  // namespace pmech::brackets
