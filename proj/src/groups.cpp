#include "pmech/groups.hpp"

namespace pmech::groups {

namespace {

IntMatrix zeros(std::size_t d) { return IntMatrix(d, std::vector<long>(d, 0)); }

IntMatrix commutator(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t d = a.size();
  IntMatrix out = zeros(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i][k] == 0 && b[i][k] == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
    }
  return out;
}

// Rank of the flattened matrices over the rationals.
std::size_t rank_of(const std::vector<IntMatrix>& mats) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& m : mats) {
    std::vector<Rational> r;
    for (const auto& row : m)
      for (long v : row) r.emplace_back(v);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || sgn(rows[r][c]) == 0) continue;
      const Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t StructureConstants::nonzero_brackets() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      for (long c : bracket[i][j])
        if (c != 0) {
          ++count;
          break;
        }
  return count;
}

std::vector<std::size_t> StructureConstants::centre() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    bool central = true;
    for (std::size_t j = 0; j < size() && central; ++j)
      for (long c : bracket[i][j])
        if (c != 0) central = false;
    if (central) out.push_back(i);
  }
  return out;
}

StructureConstants algebra_commutators(GroupKind kind, std::size_t n) {
  StructureConstants t{kind, n, {}, {}};
  auto set = [&t](std::size_t i, std::size_t j, std::size_t k) {
    t.bracket[i][j][k] = 1;
    t.bracket[j][i][k] = -1;
  };
  if (kind == GroupKind::Heisenberg) {
    if (n < 1) throw DimensionError("H^n needs n >= 1");
    t.basis.push_back("S");
    for (std::size_t i = 1; i <= n; ++i) t.basis.push_back("X" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) t.basis.push_back("Y" + std::to_string(i));
    const std::size_t d = t.basis.size();
    t.bracket.assign(d, std::vector<std::vector<long>>(d, std::vector<long>(d, 0)));
    for (std::size_t i = 0; i < n; ++i) set(1 + i, 1 + n + i, 0);  // [X_i, Y_i] = S
  } else {
    const std::size_t m = n + 1;
    t.basis.push_back("X");
    for (std::size_t mu = 0; mu < m; ++mu) t.basis.push_back("Y" + std::to_string(mu));
    for (std::size_t mu = 0; mu < m; ++mu) t.basis.push_back("S" + std::to_string(mu));
    const std::size_t d = t.basis.size();
    t.bracket.assign(d, std::vector<std::vector<long>>(d, std::vector<long>(d, 0)));
    for (std::size_t mu = 0; mu < m; ++mu) set(0, 1 + mu, 1 + m + mu);  // [X, Y_mu] = S_mu
  }
  return t;
}

std::vector<IntMatrix> matrix_realization(GroupKind kind, std::size_t n) {
  std::vector<IntMatrix> mats;
  if (kind == GroupKind::Heisenberg) {
    // (n+2)x(n+2): X_i = E_{0,i}, Y_i = E_{i,n+1}, S = E_{0,n+1}
    const std::size_t d = n + 2;
    IntMatrix s = zeros(d);
    s[0][n + 1] = 1;
    mats.push_back(s);
    for (std::size_t i = 1; i <= n; ++i) {
      IntMatrix x = zeros(d);
      x[0][i] = 1;
      mats.push_back(x);
    }
    for (std::size_t i = 1; i <= n; ++i) {
      IntMatrix y = zeros(d);
      y[i][n + 1] = 1;
      mats.push_back(y);
    }
  } else {
    // One 3x3 Heisenberg block per mu; X acts in every block.
    const std::size_t m = n + 1;
    const std::size_t d = 3 * m;
    IntMatrix x = zeros(d);
    for (std::size_t mu = 0; mu < m; ++mu) x[3 * mu][3 * mu + 1] = 1;
    mats.push_back(x);
    for (std::size_t mu = 0; mu < m; ++mu) {
      IntMatrix y = zeros(d);
      y[3 * mu + 1][3 * mu + 2] = 1;
      mats.push_back(y);
    }
    for (std::size_t mu = 0; mu < m; ++mu) {
      IntMatrix s = zeros(d);
      s[3 * mu][3 * mu + 2] = 1;
      mats.push_back(s);
    }
  }
  return mats;
}

RealizationCheck verify_realization(const StructureConstants& table,
                                    const std::vector<IntMatrix>& mats) {
  RealizationCheck out;
  if (mats.size() != table.size()) return out;
  out.faithful = rank_of(mats) == mats.size();
  out.consistent = true;
  const std::size_t dim = mats.front().size();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = 0; j < mats.size(); ++j) {
      const IntMatrix c = commutator(mats[i], mats[j]);
      IntMatrix expected = zeros(dim);
      for (std::size_t k = 0; k < mats.size(); ++k) {
        const long coef = table.bracket[i][j][k];
        if (coef == 0) continue;
        for (std::size_t r = 0; r < dim; ++r)
          for (std::size_t s = 0; s < dim; ++s) expected[r][s] += coef * mats[k][r][s];
      }
      if (c != expected) out.consistent = false;
      ++out.pairs_checked;
    }
  }
  return out;
}

}  // namespace pmech::groups
