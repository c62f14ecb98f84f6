#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmech/rational.hpp"

namespace pmech::clifford {

/// Which anticommutator the generators satisfy.
///  Standard: e^mu e^nu + e^nu e^mu = 2 eta^{mu nu}, so (e^mu)^2 = eta^{mu mu}.
///  Literal:  e^mu e^nu + e^nu e^mu = eta^{mu nu}, so (e^mu)^2 = eta^{mu mu} / 2.
enum class Normalization { Standard, Literal };

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Diagonal metric eta^{mu mu} of an (n+1)-dimensional spacetime.
class Metric {
 public:
  static constexpr std::size_t kMaxDim = 16;

  explicit Metric(std::vector<Rational> diag, Normalization norm = Normalization::Standard);

  static Metric from_signs(const std::vector<int>& signs,
                           Normalization norm = Normalization::Standard);

  std::size_t dim() const { return diag_.size(); }
  const Rational& eta(std::size_t mu) const;
  /// eta_{mu mu} = 1 / eta^{mu mu}.
  Rational eta_lower(std::size_t mu) const;
  /// Value of (e^mu)^2 under the active normalization.
  const Rational& square(std::size_t mu) const { return squares_.at(mu); }
  Normalization normalization() const { return norm_; }
  const std::vector<Rational>& diag() const { return diag_; }

  bool operator==(const Metric& other) const {
    return norm_ == other.norm_ && diag_ == other.diag_;
  }

 private:
  std::vector<Rational> diag_;
  std::vector<Rational> squares_;
  Normalization norm_;
};

using MetricPtr = std::shared_ptr<const Metric>;

inline MetricPtr make_metric(const std::vector<int>& signs,
                             Normalization norm = Normalization::Standard) {
  return std::make_shared<const Metric>(Metric::from_signs(signs, norm));
}

/// Basis blade as a bitmask over generator indices, ascending order implied.
using Blade = std::uint32_t;

inline int grade(Blade b) { return std::popcount(b); }

/// Sign picked up when the concatenated word a·b is sorted into ascending order.
inline int reorder_sign(Blade a, Blade b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

template <class T>
class Multivector {
 public:
  using Scalar = T;

  explicit Multivector(MetricPtr metric) : metric_(std::move(metric)) {
    if (!metric_) throw MetricError("multivector needs a metric");
  }

  static Multivector scalar(MetricPtr metric, const T& value) {
    Multivector m(std::move(metric));
    m.set(0, value);
    return m;
  }

  static Multivector blade(MetricPtr metric, Blade b, const T& value) {
    Multivector m(std::move(metric));
    m.set(b, value);
    return m;
  }

  const MetricPtr& metric() const { return metric_; }
  const std::map<Blade, T>& coeffs() const { return coeffs_; }

  T component(Blade b) const {
    auto it = coeffs_.find(b);
    return it == coeffs_.end() ? T{} : it->second;
  }
  T scalar_part() const { return component(0); }

  void set(Blade b, const T& value) {
    check_blade(b);
    if (pmech::is_zero(value)) {
      coeffs_.erase(b);
    } else {
      coeffs_[b] = value;
    }
  }

  void add_to(Blade b, const T& value) {
    check_blade(b);
    auto [it, inserted] = coeffs_.try_emplace(b, value);
    if (!inserted) it->second += value;
    if (pmech::is_zero(it->second)) coeffs_.erase(it);
  }

  bool is_zero() const { return coeffs_.empty(); }

  Multivector grade_part(int g) const {
    Multivector out(metric_);
    for (const auto& [b, c] : coeffs_)
      if (grade(b) == g) out.coeffs_.emplace(b, c);
    return out;
  }

  Multivector& operator+=(const Multivector& o) {
    check_same(o);
    for (const auto& [b, c] : o.coeffs_) add_to(b, c);
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same(o);
    for (const auto& [b, c] : o.coeffs_) add_to(b, -c);
    return *this;
  }
  Multivector& operator*=(const T& s) {
    if (pmech::is_zero(s)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [b, c] : coeffs_) c *= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= T(-1); }
  friend Multivector operator*(Multivector a, const T& s) { return a *= s; }
  friend Multivector operator*(const T& s, Multivector a) { return a *= s; }

  /// Geometric product.
  friend Multivector operator*(const Multivector& a, const Multivector& b) {
    a.check_same(b);
    const Metric& m = *a.metric_;
    Multivector out(a.metric_);
    for (const auto& [ba, ca] : a.coeffs_) {
      for (const auto& [bb, cb] : b.coeffs_) {
        T factor = ca * cb;
        if (reorder_sign(ba, bb) < 0) factor = -factor;
        Blade common = ba & bb;
        while (common != 0) {
          const int mu = std::countr_zero(common);
          factor *= scalar_from<T>(m.square(static_cast<std::size_t>(mu)));
          common &= common - 1;
        }
        out.add_to(ba ^ bb, factor);
      }
    }
    return out;
  }

  bool operator==(const Multivector& o) const {
    return (metric_ == o.metric_ || *metric_ == *o.metric_) && coeffs_ == o.coeffs_;
  }

  void check_same(const Multivector& o) const {
    if (metric_ != o.metric_ && !(*metric_ == *o.metric_))
      throw MetricError("multivectors over different metrics");
  }

 private:
  void check_blade(Blade b) const {
    if ((b >> metric_->dim()) != 0) throw MetricError("blade index outside metric dimension");
  }

  MetricPtr metric_;
  std::map<Blade, T> coeffs_;
};

template <class T>
bool is_zero(const Multivector<T>& m) {
  return m.is_zero();
}

/// Grade-1 generator e^mu.
template <class T = Rational>
Multivector<T> generator(const MetricPtr& metric, std::size_t mu) {
  if (mu >= metric->dim()) throw std::out_of_range("generator index out of range");
  return Multivector<T>::blade(metric, Blade{1} << mu, T(1));
}

/// e_mu = (eta^{mu mu})^{-1} e^mu for a diagonal metric.
template <class T = Rational>
Multivector<T> lower_index(const MetricPtr& metric, std::size_t mu) {
  if (mu >= metric->dim()) throw std::out_of_range("generator index out of range");
  return Multivector<T>::blade(metric, Blade{1} << mu, scalar_from<T>(metric->eta_lower(mu)));
}

template <class T>
Multivector<double> to_double(const Multivector<T>& m) {
  Multivector<double> out(m.metric());
  for (const auto& [b, c] : m.coeffs()) out.set(b, scalar_from<double>(c));
  return out;
}

std::string blade_name(Blade b);

template <class T>
std::ostream& operator<<(std::ostream& os, const Multivector<T>& m) {
  if (m.is_zero()) return os << "0";
  bool first = true;
  for (const auto& [b, c] : m.coeffs()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    if (b != 0) os << "*" << blade_name(b);
  }
  return os;
}

}  // namespace pmech::clifford
