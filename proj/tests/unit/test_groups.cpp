#include <doctest.h>

#include <random>

#include "pmech/groups.hpp"
#include "pmech/rational.hpp"

using namespace pmech;
using namespace pmech::groups;

namespace {

using H = HeisenbergElement<Rational>;
using G = GalileanElement<Rational>;
using M3 = std::array<std::array<Rational, 3>, 3>;

// Unipotent 3x3 image of exp(s S + x X + y Y): [[1, x, s + xy/2], [0, 1, y], [0, 0, 1]].
M3 to_matrix(const Rational& s, const Rational& x, const Rational& y) {
  M3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  m[0][1] = x;
  m[1][2] = y;
  m[0][2] = s + x * y / 2;
  return m;
}

M3 mul(const M3& a, const M3& b) {
  M3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

struct Gen {
  std::mt19937_64 rng{17};
  Rational r() {
    Rational q(std::uniform_int_distribution<long>(-20, 20)(rng), std::uniform_int_distribution<long>(1, 12)(rng));
    q.canonicalize();
    return q;
  }
  H h(std::size_t n) {
    H g{r(), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      g.x.push_back(r());
      g.y.push_back(r());
    }
    return g;
  }
  G gal(std::size_t d) {
    G g{{}, r(), {}};
    for (std::size_t i = 0; i < d; ++i) {
      g.s.push_back(r());
      g.y.push_back(r());
    }
    return g;
  }
};

}  // namespace

TEST_CASE("Heisenberg product agrees with the unipotent matrix model") {
  Gen gen;
  for (int t = 0; t < 200; ++t) {
    const H a = gen.h(1), b = gen.h(1);
    const H c = h_multiply(a, b);
    CHECK(mul(to_matrix(a.s, a.x[0], a.y[0]), to_matrix(b.s, b.x[0], b.y[0])) == to_matrix(c.s, c.x[0], c.y[0]));
  }
}

TEST_CASE("Heisenberg law on a worked example") {
  const H a{Rational(1), {Rational(2)}, {Rational(3)}};
  const H b{Rational(-1), {Rational(5)}, {Rational(7)}};
  // s = 1 - 1 + (2*7 - 5*3)/2
  CHECK(h_multiply(a, b) == H{Rational(-1, 2), {Rational(7)}, {Rational(10)}});
}

TEST_CASE("Heisenberg identity, inverse and associativity for n = 1, 2") {
  Gen gen;
  for (std::size_t n : {1u, 2u}) {
    const H e = H::identity(n);
    for (int t = 0; t < 100; ++t) {
      const H a = gen.h(n), b = gen.h(n), c = gen.h(n);
      CHECK(h_multiply(h_multiply(a, b), c) == h_multiply(a, h_multiply(b, c)));
      CHECK(h_multiply(a, e) == a);
      CHECK(h_multiply(e, a) == a);
      CHECK(h_multiply(a, h_inverse(a)) == e);
      CHECK(h_multiply(h_inverse(a), a) == e);
    }
  }
}

TEST_CASE("Galilean law is a Heisenberg law per central slot sharing x") {
  Gen gen;
  for (int t = 0; t < 100; ++t) {
    const G a = gen.gal(4), b = gen.gal(4);
    const G c = g_multiply(a, b);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const H ha{a.s[mu], {a.x}, {a.y[mu]}}, hb{b.s[mu], {b.x}, {b.y[mu]}};
      CHECK(h_multiply(ha, hb) == H{c.s[mu], {c.x}, {c.y[mu]}});
    }
  }
}

TEST_CASE("Galilean identity, inverse and associativity for dim 2, 4") {
  Gen gen;
  for (std::size_t d : {2u, 4u}) {
    const G e = G::identity(d);
    for (int t = 0; t < 100; ++t) {
      const G a = gen.gal(d), b = gen.gal(d), c = gen.gal(d);
      CHECK(g_multiply(g_multiply(a, b), c) == g_multiply(a, g_multiply(b, c)));
      CHECK(g_multiply(a, g_inverse(a)) == e);
      CHECK(g_multiply(e, a) == a);
    }
  }
}

TEST_CASE("shape mismatches are rejected") {
  const H a{Rational(0), {Rational(1)}, {Rational(1)}};
  const H b{Rational(0), {Rational(1), Rational(2)}, {Rational(1), Rational(2)}};
  CHECK_THROWS_AS(h_multiply(a, b), DimensionError);
  CHECK_THROWS_AS(h_inverse(H{Rational(0), {Rational(1)}, {}}), DimensionError);
  CHECK_THROWS_AS(g_multiply(G::identity(2), G::identity(3)), DimensionError);
  const CoadjointPoint<Rational> f{Rational(1), {Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
  CHECK_THROWS_AS(coadjoint(a, f), DimensionError);
}

TEST_CASE("coadjoint action moves points within their orbit") {
  Gen gen;
  for (int t = 0; t < 200; ++t) {
    const H g = gen.h(2);
    const CoadjointPoint<Rational> f{gen.r(), {gen.r(), gen.r()}, {gen.r(), gen.r()}};
    const auto moved = coadjoint(g, f);
    CHECK(moved.hbar == f.hbar);
    CHECK(classify_orbit(moved) == classify_orbit(f));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(moved.q[i] == f.q[i] + f.hbar * g.y[i]);
      CHECK(moved.p[i] == f.p[i] - f.hbar * g.x[i]);
    }
  }
}

TEST_CASE("hbar = 0 points are fixed and classified as points") {
  Gen gen;
  const CoadjointPoint<Rational> f{Rational(0), {Rational(3, 2)}, {Rational(-2)}};
  for (int t = 0; t < 50; ++t) CHECK(coadjoint(gen.h(1), f) == f);
  const auto tag = classify_orbit(f);
  REQUIRE(std::holds_alternative<PointOrbit<Rational>>(tag));
  CHECK(std::get<PointOrbit<Rational>>(tag).q[0] == Rational(3, 2));
  const CoadjointPoint<Rational> g{Rational(2), {Rational(1)}, {Rational(1)}};
  CHECK(classify_orbit(g) == OrbitTag<Rational>{PlaneOrbit<Rational>{Rational(2)}});
}

TEST_CASE("structure constants and matrix realizations") {
  const auto h = algebra_commutators(GroupKind::Heisenberg, 2);
  CHECK(h.basis == std::vector<std::string>{"S", "X1", "X2", "Y1", "Y2"});
  CHECK(h.nonzero_brackets() == 2);
  CHECK(h.centre() == std::vector<std::size_t>{0});
  CHECK(h.bracket[1][3][0] == 1);
  CHECK(h.bracket[3][1][0] == -1);
  CHECK(h.bracket[1][4][0] == 0);

  const auto g = algebra_commutators(GroupKind::Galilean, 1);
  CHECK(g.basis == std::vector<std::string>{"X", "Y0", "Y1", "S0", "S1"});
  CHECK(g.centre() == std::vector<std::size_t>{3, 4});

  for (auto kind : {GroupKind::Heisenberg, GroupKind::Galilean})
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto table = algebra_commutators(kind, n);
      const auto check = verify_realization(table, matrix_realization(kind, n));
      CHECK(check.faithful);
      CHECK(check.consistent);
    }
  CHECK_THROWS_AS(algebra_commutators(GroupKind::Heisenberg, 0), DimensionError);
}

TEST_CASE("a wrong table is caught by the realization check") {
  auto table = algebra_commutators(GroupKind::Heisenberg, 1);
  table.bracket[1][2][0] = 2;
  table.bracket[2][1][0] = -2;
  CHECK_FALSE(verify_realization(table, matrix_realization(GroupKind::Heisenberg, 1)).consistent);
}
