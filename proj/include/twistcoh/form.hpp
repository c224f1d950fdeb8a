#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "twistcoh/setup.hpp"

namespace twistcoh {

/// Partial-fraction normal form  sum_m poly[m] t^m + sum_{(k,m)} c_{k,m} (t - x_k)^{-m}
/// with poles only at punctures (referenced by index). Exact zeros are never
/// stored.
class PartialFractions {
 public:
  using PoleKey = std::pair<std::size_t, int>;  // (puncture index, order >= 1)

  const std::vector<cplx>& poly() const { return poly_; }
  const std::map<PoleKey, cplx>& poles() const { return poles_; }

  bool is_zero() const { return poly_.empty() && poles_.empty(); }

  cplx poly_coefficient(std::size_t degree) const {
    return degree < poly_.size() ? poly_[degree] : cplx{};
  }

  cplx pole_coefficient(std::size_t k, int order) const {
    const auto it = poles_.find({k, order});
    return it == poles_.end() ? cplx{} : it->second;
  }

  int max_order(std::size_t k) const {
    int best = 0;
    for (const auto& [key, c] : poles_) {
      if (key.first == k) best = std::max(best, key.second);
    }
    return best;
  }

  PartialFractions& add_poly(std::size_t degree, cplx c) {
    if (c == cplx{}) return *this;
    if (poly_.size() <= degree) poly_.resize(degree + 1);
    poly_[degree] += c;
    trim();
    return *this;
  }

  PartialFractions& add_pole(std::size_t k, int order, cplx c) {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "pole order must be at least 1");
    if (c == cplx{}) return *this;
    auto [it, inserted] = poles_.try_emplace({k, order}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) poles_.erase(it);
    }
    return *this;
  }

  /// Forces a coefficient to exactly zero.
  void clear_poly(std::size_t degree) {
    if (degree < poly_.size()) {
      poly_[degree] = cplx{};
      trim();
    }
  }
  void clear_pole(std::size_t k, int order) { poles_.erase({k, order}); }

  PartialFractions& operator+=(const PartialFractions& other) {
    for (std::size_t m = 0; m < other.poly_.size(); ++m) add_poly(m, other.poly_[m]);
    for (const auto& [key, c] : other.poles_) add_pole(key.first, key.second, c);
    return *this;
  }

  PartialFractions& operator*=(cplx s) {
    if (s == cplx{}) {
      poly_.clear();
      poles_.clear();
      return *this;
    }
    for (cplx& c : poly_) c *= s;
    for (auto& [key, c] : poles_) c *= s;
    trim();
    return *this;
  }

  friend PartialFractions operator+(PartialFractions a, const PartialFractions& b) { return a += b; }
  friend PartialFractions operator*(cplx s, PartialFractions a) { return a *= s; }
  friend PartialFractions operator-(PartialFractions a, const PartialFractions& b) {
    return a += cplx(-1.0, 0.0) * b;
  }

  /// Highest referenced puncture index + 1 (0 when there are no poles).
  std::size_t pole_span() const {
    std::size_t span = 0;
    for (const auto& [key, c] : poles_) span = std::max(span, key.first + 1);
    return span;
  }

  cplx evaluate(const TwistedSetup& setup, cplx t) const {
    cplx value{};
    for (std::size_t m = poly_.size(); m-- > 0;) value = value * t + poly_[m];
    for (const auto& [key, c] : poles_) {
      value += c / std::pow(t - setup.puncture(key.first), key.second);
    }
    return value;
  }

 private:
  void trim() {
    while (!poly_.empty() && poly_.back() == cplx{}) poly_.pop_back();
  }

  std::vector<cplx> poly_;
  std::map<PoleKey, cplx> poles_;
};

/// A rational function with poles at the punctures.
struct RationalFunction {
  PartialFractions terms;

  cplx operator()(const TwistedSetup& setup, cplx t) const { return terms.evaluate(setup, t); }
};

/// A rational 1-form R(t) dt with poles at the punctures (and infinity).
struct RationalOneForm {
  PartialFractions coefficient;

  /// R(t), the coefficient of dt.
  cplx operator()(const TwistedSetup& setup, cplx t) const { return coefficient.evaluate(setup, t); }
  bool is_zero() const { return coefficient.is_zero(); }

  friend RationalOneForm operator+(const RationalOneForm& a, const RationalOneForm& b) {
    return {a.coefficient + b.coefficient};
  }
  friend RationalOneForm operator-(const RationalOneForm& a, const RationalOneForm& b) {
    return {a.coefficient - b.coefficient};
  }
  friend RationalOneForm operator*(cplx s, const RationalOneForm& a) { return {s * a.coefficient}; }
};

inline void check_form(const TwistedSetup& setup, const PartialFractions& pf) {
  if (pf.pole_span() > setup.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "form references a pole beyond the last puncture");
  }
}

/// eta_k = dt / (t - x_k).
inline RationalOneForm basis_form(std::size_t k) {
  RationalOneForm eta;
  eta.coefficient.add_pole(k, 1, 1.0);
  return eta;
}

/// Multiplies by 1/(t - x_j) and re-expands in partial fractions.
inline PartialFractions multiply_by_simple_pole(const TwistedSetup& setup, const PartialFractions& f,
                                                std::size_t j) {
  check_index(setup, j);
  const cplx xj = setup.puncture(j);
  PartialFractions out;
  // t^m / (t - x_j) = sum_{l < m} x_j^{m-1-l} t^l + x_j^m / (t - x_j)
  for (std::size_t m = 0; m < f.poly().size(); ++m) {
    const cplx c = f.poly()[m];
    if (c == cplx{}) continue;
    cplx power{1.0, 0.0};
    for (std::size_t l = m; l-- > 0;) {
      out.add_poly(l, c * power);
      power *= xj;
    }
    out.add_pole(j, 1, c * power);
  }
  for (const auto& [key, c] : f.poles()) {
    const auto [k, m] = key;
    if (k == j) {
      out.add_pole(j, m + 1, c);
      continue;
    }
    // u = t - x_k, e = x_j - x_k:
    // 1/(u^m (u - e)) = e^{-m}/(t - x_j) - sum_{q=1}^{m} e^{-(m-q+1)} u^{-q}
    const cplx e = xj - setup.puncture(k);
    out.add_pole(j, 1, c * std::pow(e, -m));
    for (int q = 1; q <= m; ++q) out.add_pole(k, q, -c * std::pow(e, -(m - q + 1)));
  }
  return out;
}

inline PartialFractions derivative(const PartialFractions& f) {
  PartialFractions out;
  for (std::size_t m = 1; m < f.poly().size(); ++m) {
    out.add_poly(m - 1, static_cast<double>(m) * f.poly()[m]);
  }
  for (const auto& [key, c] : f.poles()) out.add_pole(key.first, key.second + 1, -static_cast<double>(key.second) * c);
  return out;
}

/// omega = sum_i alpha_i dt / (t - x_i).
inline RationalOneForm connection_form(const TwistedSetup& setup) {
  RationalOneForm omega;
  for (std::size_t i = 0; i < setup.size(); ++i) omega.coefficient.add_pole(i, 1, setup.exponent(i));
  return omega;
}

/// (d + omega) f = (f' + f sum_j alpha_j / (t - x_j)) dt.
inline RationalOneForm twisted_differential(const TwistedSetup& setup, const RationalFunction& f) {
  check_form(setup, f.terms);
  RationalOneForm out{derivative(f.terms)};
  for (std::size_t j = 0; j < setup.size(); ++j) {
    out.coefficient += setup.exponent(j) * multiply_by_simple_pole(setup, f.terms, j);
  }
  return out;
}

inline RationalFunction monomial(std::size_t degree) {
  RationalFunction f;
  f.terms.add_poly(degree, 1.0);
  return f;
}

/// (t - x_k)^{-order}
inline RationalFunction inverse_power(std::size_t k, int order) {
  RationalFunction f;
  f.terms.add_pole(k, order, 1.0);
  return f;
}

}  // namespace twistcoh
