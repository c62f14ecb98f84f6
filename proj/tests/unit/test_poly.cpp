#include <doctest.h>

#include "pmech/observable.hpp"
#include "pmech/poly.hpp"

using namespace pmech;
using brackets::Observable;

namespace {

std::optional<std::size_t> xy(std::string_view v) {
  if (v == "x") return 0;
  if (v == "y") return 1;
  return std::nullopt;
}

poly::RationalPolynomial P(std::string_view s) { return poly::parse_polynomial(s, 2, xy); }

const std::vector<std::string> kNames{"x", "y"};

}  // namespace

TEST_CASE("rationals parse from integers, fractions and decimals") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5e-1") == Rational(-3, 20));
  CHECK(parse_rational(" 2e3 ") == Rational(2000));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e"), std::invalid_argument);
}

TEST_CASE("parser handles sums, products, powers and parentheses") {
  const auto p = P("(x + y)^2 - 2*x*y");
  CHECK(p == P("x^2 + y^2"));
  CHECK(P("(x^2 + y^2)/2") == P("1/2*x^2 + 1/2*y^2"));
  CHECK(P("-x") == -P("x"));
  CHECK_THROWS_AS(P("3 x y"), poly::ParseError);
  CHECK(P("0").is_zero());
  CHECK(P("x - x").is_zero());
}

TEST_CASE("parser rejects malformed text") {
  CHECK_THROWS_AS(P("x^"), poly::ParseError);
  CHECK_THROWS_AS(P("z"), poly::ParseError);
  CHECK_THROWS_AS(P("(x + y"), poly::ParseError);
  CHECK_THROWS_AS(P("x / y"), poly::ParseError);
  CHECK_THROWS_AS(P("x / 0"), poly::ParseError);
  CHECK_THROWS_AS(P("x^-1"), poly::ParseError);
  CHECK_THROWS_AS(P(""), poly::ParseError);
}

TEST_CASE("formatting orders terms by descending degree") {
  CHECK(poly::format_polynomial(P("1 + y - 3*x^2*y"), kNames) == "-3*x^2*y + y + 1");
  CHECK(poly::format_polynomial(P("x/2"), kNames) == "1/2*x");
  CHECK(poly::format_polynomial(poly::RationalPolynomial(2), kNames) == "0");
  CHECK(poly::format_polynomial(poly::to_real(P("x/4")), kNames) == "0.25*x");
}

TEST_CASE("formatted polynomials parse back to themselves") {
  for (const char* s : {"x^3*y - 2/3*y^2 + 5", "-x", "x*y^4 - x^4*y + 1/7"}) {
    const auto p = P(s);
    CHECK(P(poly::format_polynomial(p, kNames)) == p);
  }
}

TEST_CASE("derivatives follow the power rule") {
  const auto p = P("x^3*y^2 + 4*x");
  CHECK(p.derivative(0) == P("3*x^2*y^2 + 4"));
  CHECK(p.derivative(1, 2) == P("2*x^3"));
  CHECK(p.derivative(0, 4).is_zero());
  const unsigned orders[] = {1, 1};
  CHECK(p.derivative(orders) == P("6*x^2*y"));
  CHECK_THROWS_AS(p.derivative(2), std::out_of_range);
}

TEST_CASE("evaluation, substitution and coefficient norm") {
  const auto p = P("x^2*y - 3*y + 1/2");
  const double pt[] = {2.0, -1.0};
  CHECK(poly::evaluate(p, std::span<const double>(pt)) == doctest::Approx(-4.0 + 3.0 + 0.5));
  const auto s = poly::substitute(p, 1, 2.0);
  CHECK(s.coefficient({2, 0}).value() == doctest::Approx(2.0));
  CHECK(s.coefficient({0, 0}).value() == doctest::Approx(-5.5));
  CHECK(poly::coefficient_norm(poly::to_real(P("3*x + 4*y"))) == doctest::Approx(5.0));
}

TEST_CASE("products and degrees") {
  CHECK(P("x + y") * P("x - y") == P("x^2 - y^2"));
  CHECK(P("x^2*y + y").total_degree() == 3);
  CHECK(P("x^2*y + y").degree_in(1) == 1);
  CHECK(poly::RationalPolynomial(2).total_degree() == -1);
  CHECK_THROWS_AS(P("x") + poly::RationalPolynomial(3), std::invalid_argument);
}

TEST_CASE("observables name their variables by degree of freedom count") {
  CHECK(Observable::parse("q*p + h", 1).variable_names() == std::vector<std::string>{"q", "p", "h"});
  CHECK(Observable::parse("q1*p2", 2).variable_names() ==
        std::vector<std::string>{"q1", "q2", "p1", "p2", "h"});
  CHECK_THROWS(Observable::parse("q", 2));
  CHECK_THROWS(Observable::parse("q3", 2));
  CHECK_THROWS_AS(Observable(0), std::invalid_argument);
}

TEST_CASE("observable h-grading") {
  const auto f = Observable::parse("q^2 + 3*h^2*p - h*q", 1);
  CHECK(f.h_degree() == 2);
  CHECK(f.degree() == 2);
  CHECK(f.h_part(0) == Observable::parse("q^2", 1));
  CHECK(f.h_part(1) == Observable::parse("-q", 1));
  CHECK(f.h_part(2) == Observable::parse("3*p", 1));
  CHECK(f.h_part(2).times_h(2) == Observable::parse("3*h^2*p", 1));
  const auto r = f.at_lambda(0.5);
  CHECK(r.coefficient({0, 1, 0}).value() == doctest::Approx(0.75));
  CHECK(r.coefficient({1, 0, 0}).value() == doctest::Approx(-0.5));
  CHECK(f.to_string() == "3*p*h^2 + q^2 - q*h");
}
