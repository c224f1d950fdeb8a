#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "twistcoh/error.hpp"
#include "twistcoh/setup.hpp"

namespace twistcoh {

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline cplx lanczos_gamma(cplx z) {
  z -= 1.0;
  cplx sum = kLanczosCoefficients[0];
  for (std::size_t k = 1; k < kLanczosCoefficients.size(); ++k) {
    sum += kLanczosCoefficients[k] / (z + static_cast<double>(k));
  }
  const cplx t = z + kLanczosG + 0.5;
  return std::sqrt(kTwoPi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

}  // namespace detail

/// Complex Gamma function; reflection formula for Re z < 1/2.
inline cplx complex_gamma(cplx z) {
  if (z.real() <= 0.5 && std::abs(z.imag()) <= kIntegerTolerance &&
      std::abs(z.real() - std::round(z.real())) <= kIntegerTolerance) {
    throw Error(ErrorCode::PoleOfGamma, "Gamma has a pole at " + detail::format(z));
  }
  if (z.real() < 0.5) {
    return kPi / (std::sin(kPi * z) * detail::lanczos_gamma(1.0 - z));
  }
  return detail::lanczos_gamma(z);
}

}  // namespace twistcoh
