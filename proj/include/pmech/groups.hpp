#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pmech/rational.hpp"

namespace pmech::groups {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// omega(x,y;x',y') = x.y' - x'.y
template <class T>
T symplectic_form(std::span<const T> x, std::span<const T> y, std::span<const T> x2,
                  std::span<const T> y2) {
  if (x.size() != y.size() || x.size() != x2.size() || x.size() != y2.size())
    throw DimensionError("symplectic_form: length mismatch");
  T acc{0};
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y2[i] - x2[i] * y[i];
  return acc;
}

/// Point (s, x, y) of the Heisenberg group H^n in exponential coordinates.
template <class T>
struct HeisenbergElement {
  T s{0};
  std::vector<T> x;
  std::vector<T> y;

  static HeisenbergElement identity(std::size_t n) {
    return {T{0}, std::vector<T>(n, T{0}), std::vector<T>(n, T{0})};
  }
  std::size_t n() const { return x.size(); }
  bool operator==(const HeisenbergElement&) const = default;
};

template <class T>
void check_shape(const HeisenbergElement<T>& g) {
  if (g.x.size() != g.y.size()) throw DimensionError("Heisenberg element: |x| != |y|");
}

template <class T>
HeisenbergElement<T> h_multiply(const HeisenbergElement<T>& a, const HeisenbergElement<T>& b) {
  check_shape(a);
  check_shape(b);
  if (a.n() != b.n()) throw DimensionError("h_multiply: dimension mismatch");
  HeisenbergElement<T> out;
  out.s = a.s + b.s +
          symplectic_form<T>(a.x, a.y, b.x, b.y) / T(2);
  out.x.resize(a.n());
  out.y.resize(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    out.x[i] = a.x[i] + b.x[i];
    out.y[i] = a.y[i] + b.y[i];
  }
  return out;
}

template <class T>
HeisenbergElement<T> h_inverse(const HeisenbergElement<T>& g) {
  check_shape(g);
  HeisenbergElement<T> out{T(-g.s), g.x, g.y};
  for (auto& v : out.x) v = -v;
  for (auto& v : out.y) v = -v;
  return out;
}

/// Point (s_0..s_n, x, y_0..y_n) of the Galilean group G^{n+1}.
template <class T>
struct GalileanElement {
  std::vector<T> s;
  T x{0};
  std::vector<T> y;

  static GalileanElement identity(std::size_t spacetime_dim) {
    return {std::vector<T>(spacetime_dim, T{0}), T{0}, std::vector<T>(spacetime_dim, T{0})};
  }
  std::size_t spacetime_dim() const { return s.size(); }
  bool operator==(const GalileanElement&) const = default;
};

template <class T>
GalileanElement<T> g_multiply(const GalileanElement<T>& a, const GalileanElement<T>& b) {
  const std::size_t d = a.spacetime_dim();
  if (a.y.size() != d || b.s.size() != d || b.y.size() != d)
    throw DimensionError("g_multiply: dimension mismatch");
  GalileanElement<T> out;
  out.s.resize(d);
  out.y.resize(d);
  for (std::size_t mu = 0; mu < d; ++mu) {
    const T w = a.x * b.y[mu] - b.x * a.y[mu];
    out.s[mu] = a.s[mu] + b.s[mu] + w / T(2);
    out.y[mu] = a.y[mu] + b.y[mu];
  }
  out.x = a.x + b.x;
  return out;
}

template <class T>
GalileanElement<T> g_inverse(const GalileanElement<T>& g) {
  GalileanElement<T> out = g;
  for (auto& v : out.s) v = -v;
  for (auto& v : out.y) v = -v;
  out.x = -out.x;
  return out;
}

/// (hbar, q, p) in the dual of the Heisenberg Lie algebra.
template <class T>
struct CoadjointPoint {
  T hbar{0};
  std::vector<T> q;
  std::vector<T> p;
  bool operator==(const CoadjointPoint&) const = default;
};

/// (hbar, q, p) -> (hbar, q + hbar y, p - hbar x)
template <class T>
CoadjointPoint<T> coadjoint(const HeisenbergElement<T>& g, const CoadjointPoint<T>& f) {
  check_shape(g);
  if (f.q.size() != g.n() || f.p.size() != g.n())
    throw DimensionError("coadjoint: dimension mismatch");
  CoadjointPoint<T> out = f;
  for (std::size_t i = 0; i < g.n(); ++i) {
    out.q[i] += f.hbar * g.y[i];
    out.p[i] -= f.hbar * g.x[i];
  }
  return out;
}

/// Orbit through a point with hbar != 0: the whole plane at that hbar.
template <class T>
struct PlaneOrbit {
  T hbar;
  bool operator==(const PlaneOrbit&) const = default;
};
/// Orbit through a point with hbar == 0: the point itself.
template <class T>
struct PointOrbit {
  std::vector<T> q;
  std::vector<T> p;
  bool operator==(const PointOrbit&) const = default;
};
template <class T>
using OrbitTag = std::variant<PlaneOrbit<T>, PointOrbit<T>>;

template <class T>
OrbitTag<T> classify_orbit(const CoadjointPoint<T>& f) {
  if (f.hbar == T{0}) return PointOrbit<T>{f.q, f.p};
  return PlaneOrbit<T>{f.hbar};
}

// ---------------------------------------------------------------------------
// Lie algebra structure constants and a faithful matrix realization.

enum class GroupKind { Heisenberg, Galilean };

/// Integer structure constants [b_i, b_j] = sum_k c_{ij}^k b_k for a basis.
struct StructureConstants {
  GroupKind kind;
  std::size_t n;  // H^n, or G^{n+1} (spacetime dimension n+1)
  std::vector<std::string> basis;
  // bracket[i][j] is the coefficient vector of [b_i, b_j].
  std::vector<std::vector<std::vector<long>>> bracket;

  std::size_t size() const { return basis.size(); }
  std::size_t nonzero_brackets() const;  // counts unordered pairs i<j
  /// Indices of basis elements that commute with everything.
  std::vector<std::size_t> centre() const;
};

/// Basis order for H^n: S, X_1..X_n, Y_1..Y_n.
/// Basis order for G^{n+1}: X, Y_0..Y_n, S_0..S_n.
StructureConstants algebra_commutators(GroupKind kind, std::size_t n);

using IntMatrix = std::vector<std::vector<long>>;

/// Strictly upper-triangular (nilpotent) matrices, one per basis element, in the
/// same order as algebra_commutators.
std::vector<IntMatrix> matrix_realization(GroupKind kind, std::size_t n);

struct RealizationCheck {
  bool faithful = false;    // images linearly independent
  bool consistent = false;  // every matrix commutator equals the tabulated bracket
  std::size_t pairs_checked = 0;
};

RealizationCheck verify_realization(const StructureConstants& table,
                                    const std::vector<IntMatrix>& mats);

}  // namespace pmech::groups
