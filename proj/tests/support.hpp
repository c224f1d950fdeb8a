#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "twistcoh/twistcoh.hpp"

namespace testing_support {

using twistcoh::cplx;
using twistcoh::TwistedSetup;

/// Real-ordered setup on the real line, exponents uniform in (lo, hi).
inline TwistedSetup random_real_setup(std::mt19937_64& rng, std::size_t n, double lo = 0.1, double hi = 0.9) {
  std::uniform_real_distribution<double> gap(0.4, 1.6);
  std::uniform_real_distribution<double> expo(lo, hi);
  for (;;) {
    std::vector<cplx> x;
    std::vector<cplx> a;
    double pos = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    for (std::size_t k = 0; k < n; ++k) {
      x.emplace_back(pos, 0.0);
      pos += gap(rng);
      a.emplace_back(expo(rng), 0.0);
    }
    try {
      return twistcoh::validate_setup(x, a);
    } catch (const twistcoh::Error&) {
    }
  }
}

/// Punctures scattered in a box, exponents with real part in (0.1, 0.9) and a
/// small imaginary part.
inline TwistedSetup random_complex_setup(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> re(0.1, 0.9);
  std::uniform_real_distribution<double> im(-0.2, 0.2);
  for (;;) {
    std::vector<cplx> x;
    std::vector<cplx> a;
    for (std::size_t k = 0; k < n; ++k) {
      x.emplace_back(coord(rng), coord(rng));
      a.emplace_back(re(rng), im(rng));
    }
    try {
      TwistedSetup s = twistcoh::validate_setup(x, a);
      // Keep punctures well separated so default loops are not tiny.
      if (s.min_gap() < 0.3) continue;
      bool spread = true;
      for (std::size_t i = 0; i < n; ++i) spread = spread && s.clearance(i) > 0.2;
      if (spread) return s;
    } catch (const twistcoh::Error&) {
    }
  }
}

/// Random point of U_i away from punctures and cuts.
inline cplx random_point_in_region(std::mt19937_64& rng, const TwistedSetup& s, std::size_t i) {
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (;;) {
    const cplx t(coord(rng), coord(rng));
    if (!twistcoh::in_region(s, twistcoh::Region::of(i), t)) continue;
    bool clear = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      clear = clear && std::abs(t - s.puncture(j)) > 0.2;
      if (j != i) clear = clear && s.distance_to_cut(t, j) > 0.05;
    }
    if (clear) return t;
  }
}

/// Composite Simpson rule on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double sum = f(a) + f(b);
  for (int k = 1; k < m; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

/// B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q) for real arguments.
inline double beta(double p, double q) { return std::tgamma(p) * std::tgamma(q) / std::tgamma(p + q); }

// Dyadic rationals k/1024 with |k| <= 4096: sums and differences are exact in double.
inline cplx random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(-4096, 4096);
  return {k(rng) / 1024.0, k(rng) / 1024.0};
}

inline double relative_error(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
