#include "pmech/clifford.hpp"

#include <cctype>
#include <charconv>

namespace pmech {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  const auto dot = s.find('.');
  const auto exp = s.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  // finite decimal with optional exponent: mantissa digits / 10^k
  std::string mant = exp == std::string::npos ? s : s.substr(0, exp);
  long e10 = 0;
  if (exp != std::string::npos) {
    const std::string es = s.substr(exp + 1);
    auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), e10);
    if (ec != std::errc{} || ptr != es.data() + es.size())
      throw std::invalid_argument("bad exponent: " + s);
  }
  const auto d = mant.find('.');
  if (d != std::string::npos) {
    e10 -= static_cast<long>(mant.size() - d - 1);
    mant.erase(d, 1);
  }
  mpz_class num;
  if (mant.empty() || mant == "-" || mant == "+" || num.set_str(mant, 10) != 0)
    throw std::invalid_argument("bad number: " + s);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(e10 < 0 ? -e10 : e10));
  Rational r = e10 < 0 ? Rational(num, pow10) : Rational(num * pow10);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace pmech

namespace pmech::clifford {

Metric::Metric(std::vector<Rational> diag, Normalization norm)
    : diag_(std::move(diag)), norm_(norm) {
  if (diag_.empty()) throw MetricError("metric dimension must be at least 1");
  if (diag_.size() > kMaxDim) throw MetricError("metric dimension too large");
  squares_.reserve(diag_.size());
  for (const auto& d : diag_) {
    if (sgn(d) == 0) throw MetricError("metric diagonal entries must be nonzero");
    squares_.push_back(norm_ == Normalization::Standard ? d : Rational(d / 2));
  }
}

Metric Metric::from_signs(const std::vector<int>& signs, Normalization norm) {
  std::vector<Rational> diag;
  diag.reserve(signs.size());
  for (int s : signs) diag.emplace_back(s);
  return Metric(std::move(diag), norm);
}

const Rational& Metric::eta(std::size_t mu) const {
  if (mu >= diag_.size()) throw std::out_of_range("metric index out of range");
  return diag_[mu];
}

Rational Metric::eta_lower(std::size_t mu) const { return Rational(1) / eta(mu); }

std::string blade_name(Blade b) {
  std::string name = "e";
  bool first = true;
  for (std::size_t mu = 0; b != 0; ++mu, b >>= 1) {
    if (b & 1u) {
      if (!first) name += "^";
      name += std::to_string(mu);
      first = false;
    }
  }
  return name;
}

}  // namespace pmech::clifford
