#include <doctest.h>

#include <sstream>

#include "pmech/clifford.hpp"

using namespace pmech;
using namespace pmech::clifford;
using MV = Multivector<Rational>;

TEST_CASE("reorder sign counts transpositions") {
  CHECK(reorder_sign(0b01, 0b10) == 1);   // e0 e1
  CHECK(reorder_sign(0b10, 0b01) == -1);  // e1 e0
  CHECK(reorder_sign(0b110, 0b001) == 1); // e1 e2 e0: two swaps
  CHECK(reorder_sign(0b100, 0b011) == 1);
  CHECK(reorder_sign(0b010, 0b101) == -1);
  CHECK(grade(0b1011) == 3);
}

TEST_CASE("generators anticommute to twice the metric (standard)") {
  const auto m = make_metric({1, -1, -1, -1});
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) {
      const auto a = generator(m, mu), b = generator(m, nu);
      const Rational want = mu == nu ? Rational(2) * m->eta(mu) : Rational(0);
      CHECK(a * b + b * a == MV::scalar(m, want));
    }
}

TEST_CASE("literal normalization halves the squares") {
  const auto m = make_metric({1, -1}, Normalization::Literal);
  const auto e0 = generator(m, 0), e1 = generator(m, 1);
  CHECK(e0 * e0 == MV::scalar(m, Rational(1, 2)));
  CHECK(e1 * e1 == MV::scalar(m, Rational(-1, 2)));
  CHECK(e0 * e1 + e1 * e0 == MV(m));
  CHECK(m->square(1) == Rational(-1, 2));
}

TEST_CASE("bivector squares follow the signature") {
  // (e0 e1)^2 = -e0^2 e1^2
  const auto mink = make_metric({1, -1});
  const auto b = generator(mink, 0) * generator(mink, 1);
  CHECK(b * b == MV::scalar(mink, Rational(1)));
  const auto eucl = make_metric({1, 1});
  const auto c = generator(eucl, 0) * generator(eucl, 1);
  CHECK(c * c == MV::scalar(eucl, Rational(-1)));
}

TEST_CASE("lower index generators invert the metric") {
  const auto m = make_metric({1, -1, -1});
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const auto prod = lower_index(m, mu) * generator(m, mu);
    CHECK(prod == MV::scalar(m, Rational(1)));
  }
  CHECK(m->eta_lower(1) == Rational(-1));
}

TEST_CASE("arithmetic keeps canonical form") {
  const auto m = make_metric({1, -1});
  MV a = MV::blade(m, 0b11, Rational(3)) + MV::scalar(m, Rational(1));
  CHECK(a.coeffs().size() == 2);
  a -= MV::blade(m, 0b11, Rational(3));
  CHECK(a == MV::scalar(m, Rational(1)));
  a *= Rational(0);
  CHECK(a.is_zero());
  const MV v = generator(m, 0) * Rational(2) + MV::blade(m, 0b11, Rational(5));
  CHECK(v.grade_part(1) == generator(m, 0) * Rational(2));
  CHECK(v.grade_part(2).component(0b11) == Rational(5));
  CHECK(v.scalar_part() == Rational(0));
  CHECK(-v + v == MV(m));
}

TEST_CASE("metric validation") {
  CHECK_THROWS_AS(make_metric({}), MetricError);
  CHECK_THROWS_AS(Metric({Rational(1), Rational(0)}), MetricError);
  CHECK_THROWS_AS(make_metric(std::vector<int>(17, 1)), MetricError);
  const auto m = make_metric({1, -1});
  CHECK_THROWS_AS(MV::blade(m, 0b100, Rational(1)), MetricError);
  CHECK_THROWS_AS(generator(m, 2), std::out_of_range);
  CHECK_THROWS_AS(MV(nullptr), MetricError);
  const auto other = make_metric({1, 1});
  CHECK_THROWS_AS(generator(m, 0) * generator(other, 0), MetricError);
  // equal metrics from different pointers interoperate
  const auto same = make_metric({1, -1});
  CHECK(generator(m, 0) * generator(same, 0) == MV::scalar(m, Rational(1)));
}

TEST_CASE("printing and blade names") {
  CHECK(blade_name(0) == "e");
  CHECK(blade_name(0b101) == "e0^2");
  const auto m = make_metric({1, -1});
  std::ostringstream os;
  os << (MV::scalar(m, Rational(1, 2)) + generator(m, 1));
  CHECK(os.str() == "(1/2) + (1)*e1");
  std::ostringstream zero;
  zero << MV(m);
  CHECK(zero.str() == "0");
}

TEST_CASE("double multivectors mirror the rational ones") {
  const auto m = make_metric({1, -1, -1, -1});
  const MV a = generator(m, 0) * Rational(3, 2) + MV::blade(m, 0b0110, Rational(-1));
  const MV b = generator(m, 2) + MV::scalar(m, Rational(2));
  const auto exact = to_double(a * b);
  const auto approx = to_double(a) * to_double(b);
  for (const auto& [blade, c] : exact.coeffs()) CHECK(approx.component(blade) == doctest::Approx(c));
  CHECK(approx.coeffs().size() == exact.coeffs().size());
}
