#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pmech {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Parses "3", "-7/2" or a finite decimal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

/// Converts an exact rational into the scalar type used by a backend.
template <class T>
T scalar_from(const Rational& r);

template <>
inline Rational scalar_from<Rational>(const Rational& r) {
  return r;
}
template <>
inline double scalar_from<double>(const Rational& r) {
  return r.get_d();
}
template <>
inline Complex scalar_from<Complex>(const Rational& r) {
  return {r.get_d(), 0.0};
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Complex& v) { return v == Complex{}; }

}  // namespace pmech
