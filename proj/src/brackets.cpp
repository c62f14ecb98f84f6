#include "pmech/brackets.hpp"

#include <stdexcept>

namespace pmech::brackets {

namespace {

void check_pair(const Observable& f, const Observable& g) {
  if (f.n() != g.n()) throw std::invalid_argument("bracket of observables with different n");
}

Rational factorial(unsigned k) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), k);
  return Rational(out);
}

// Derivative orders padded with a zero slot for h.
std::vector<unsigned> with_h_slot(const std::vector<unsigned>& orders) {
  std::vector<unsigned> out = orders;
  out.push_back(0);
  return out;
}

}  // namespace

Observable poisson_bracket(const Observable& f, const Observable& g) {
  check_pair(f, g);
  const std::size_t n = f.n();
  poly::RationalPolynomial out(2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    out += f.poly().derivative(f.q_var(j)) * g.poly().derivative(g.p_var(j));
    out -= f.poly().derivative(f.p_var(j)) * g.poly().derivative(g.q_var(j));
  }
  return Observable(n, std::move(out));
}

BidifferentialPower::BidifferentialPower(std::size_t n, unsigned k) : n_(n), k_(k) {
  terms_[{Orders(2 * n, 0), Orders(2 * n, 0)}] = 1;
  for (unsigned step = 0; step < k; ++step) {
    std::map<Key, Rational> next;
    for (const auto& [key, c] : terms_) {
      for (std::size_t j = 0; j < n; ++j) {
        Key plus = key;
        ++plus.first[j];
        ++plus.second[n + j];
        next[plus] += c;
        Key minus = key;
        ++minus.first[n + j];
        ++minus.second[j];
        next[minus] -= c;
      }
    }
    std::erase_if(next, [](const auto& kv) { return sgn(kv.second) == 0; });
    terms_ = std::move(next);
  }
}

Observable apply_bidifferential(const Observable& f, const Observable& g,
                                const BidifferentialPower& power) {
  check_pair(f, g);
  if (power.n() != f.n()) throw std::invalid_argument("bidifferential dimension mismatch");
  std::map<std::vector<unsigned>, poly::RationalPolynomial> df, dg;
  auto cached = [](auto& cache, const poly::RationalPolynomial& p, const std::vector<unsigned>& o)
      -> const poly::RationalPolynomial& {
    auto it = cache.find(o);
    if (it == cache.end()) it = cache.emplace(o, p.derivative(with_h_slot(o))).first;
    return it->second;
  };
  poly::RationalPolynomial out(2 * f.n() + 1);
  for (const auto& [key, c] : power.terms()) {
    const auto& a = cached(df, f.poly(), key.first);
    if (a.is_zero()) continue;
    const auto& b = cached(dg, g.poly(), key.second);
    if (b.is_zero()) continue;
    out += (a * b).scaled_left(c);
  }
  return Observable(f.n(), std::move(out));
}

Observable star_product(const Observable& f, const Observable& g) {
  check_pair(f, g);
  const int max_k = std::min(f.degree(), g.degree());
  Observable out(f.n());
  for (int k = 0; k <= max_k; ++k) {
    const BidifferentialPower power(f.n(), static_cast<unsigned>(k));
    const Observable term = apply_bidifferential(f, g, power);
    out += (Rational(1) / factorial(static_cast<unsigned>(k))) * term.times_h(static_cast<unsigned>(k));
  }
  return out;
}

Observable ub_bracket_poly(const Observable& f, const Observable& g) {
  check_pair(f, g);
  const int max_k = std::min(f.degree(), g.degree());
  Observable out(f.n());
  for (int k = 1, j = 0; k <= max_k; k += 2, ++j) {
    const BidifferentialPower power(f.n(), static_cast<unsigned>(k));
    const Observable term = apply_bidifferential(f, g, power);
    Rational c = Rational(1) / factorial(static_cast<unsigned>(k));
    if (j % 2 == 1) c = -c;
    out += c * term.times_h(static_cast<unsigned>(2 * j));
  }
  return out;
}

poly::RealPolynomial ub_bracket_at(const Observable& f, const Observable& g, double hbar) {
  return ub_bracket_poly(f, g).at_lambda(lambda_of_hbar(hbar));
}

// ---------------------------------------------------------------------------

EnvelopedSymbol EnvelopedSymbol::derivative(std::size_t var, unsigned order) const {
  EnvelopedSymbol out = *this;
  const auto x = poly::RationalPolynomial::variable(2 * n, var, Rational(-2) * a);
  for (unsigned k = 0; k < order; ++k) out.poly = out.poly.derivative(var) + x * out.poly;
  return out;
}

EnvelopedSymbol EnvelopedSymbol::derivative(const std::vector<unsigned>& orders) const {
  EnvelopedSymbol out = *this;
  for (std::size_t v = 0; v < orders.size(); ++v)
    if (orders[v] != 0) out = out.derivative(v, orders[v]);
  return out;
}

EnvelopedSymbol operator*(const EnvelopedSymbol& x, const EnvelopedSymbol& y) {
  if (x.n != y.n) throw std::invalid_argument("enveloped symbols with different n");
  return {x.n, x.poly * y.poly, x.a + y.a};
}

double EnvelopedSymbol::value(std::span<const double> point) const {
  double r2 = 0.0;
  for (double v : point) r2 += v * v;
  return poly::evaluate(poly, point) * std::exp(-a.get_d() * r2);
}

EnvelopedSymbol apply_bidifferential(const EnvelopedSymbol& f, const EnvelopedSymbol& g,
                                     const BidifferentialPower& power) {
  if (f.n != g.n || power.n() != f.n) throw std::invalid_argument("dimension mismatch");
  std::map<std::vector<unsigned>, EnvelopedSymbol> df, dg;
  auto cached = [](auto& cache, const EnvelopedSymbol& s,
                   const std::vector<unsigned>& o) -> const EnvelopedSymbol& {
    auto it = cache.find(o);
    if (it == cache.end()) it = cache.emplace(o, s.derivative(o)).first;
    return it->second;
  };
  EnvelopedSymbol out{f.n, poly::RationalPolynomial(2 * f.n), f.a + g.a};
  for (const auto& [key, c] : power.terms()) {
    const auto& a = cached(df, f, key.first);
    const auto& b = cached(dg, g, key.second);
    out.poly += (a.poly * b.poly).scaled_left(c);
  }
  return out;
}

std::vector<EnvelopedSymbol> ub_series_terms(const EnvelopedSymbol& f, const EnvelopedSymbol& g,
                                             std::size_t count) {
  std::vector<EnvelopedSymbol> out;
  for (std::size_t j = 0; j < count; ++j) {
    const unsigned k = static_cast<unsigned>(2 * j + 1);
    EnvelopedSymbol t = apply_bidifferential(f, g, BidifferentialPower(f.n, k));
    t.poly = t.poly.scaled_left(Rational(1) / factorial(k));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace pmech::brackets
