#pragma once

#include <cmath>
#include <vector>

#include "twistcoh/chain.hpp"
#include "twistcoh/cohomology.hpp"
#include "twistcoh/gamma.hpp"

namespace twistcoh {

/// The sign lhs/rhs takes under this toolkit's conventions: counterclockwise
/// loops, the fixed branch args in (cut - 2 pi, cut), and Varchenko rows
/// oriented from x_i back to x_{i-1}.
inline constexpr double kVarchenkoSign = 1.0;

/// Radius (relative to the minimal puncture gap) of the endpoint circles of
/// the chains scanned for the c-factors.
inline constexpr double kExtremumRadiusFactor = 1e-9;

/// 1/(alpha_1 ... alpha_N) * Gamma(alpha_0 + 1) ... Gamma(alpha_N + 1) / Gamma(sum alpha + 1)
inline cplx varchenko_prefactor(const std::vector<cplx>& exponents) {
  if (exponents.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two exponents");
  cplx value{1.0, 0.0};
  cplx sum{};
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (j > 0) value /= exponents[j];
    value *= complex_gamma(exponents[j] + 1.0);
    sum += exponents[j];
  }
  return value / complex_gamma(sum + 1.0);
}

inline void require_real_ordered(const TwistedSetup& setup) {
  const auto order = real_order(setup);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] != k) {
      throw Error(ErrorCode::NotRealOrdered, "punctures must satisfy Re x_0 < Re x_1 < ... < Re x_{n-1}");
    }
  }
}

/// c((t - x_j)^{alpha_j}, Delta_i) for Delta_i the regularized segment
/// [x_{i-1}, x_i] with endpoint circles shrunk to kExtremumRadiusFactor gaps.
inline cplx varchenko_c_factor(const TwistedSetup& setup, std::size_t i, std::size_t j) {
  if (i < 1 || i >= setup.size()) throw Error(ErrorCode::IndexOutOfRange, "i must lie in 1 .. N");
  check_index(setup, j);
  const TwistedChain delta = reg_segment(setup, i - 1, i, kExtremumRadiusFactor * setup.min_gap());
  return branch_extremum(setup, j, delta);
}

inline cplx varchenko_rhs(const TwistedSetup& setup) {
  require_real_ordered(setup);
  cplx value = varchenko_prefactor(setup.exponents());
  for (std::size_t i = 1; i < setup.size(); ++i) {
    for (std::size_t j = 0; j < setup.size(); ++j) value *= varchenko_c_factor(setup, i, j);
  }
  return value;
}

/// The Varchenko matrix [pairing of reg(x_{i-1}, x_i) with eta_j], rows built
/// as reg(i, i-1).
inline PeriodMatrix varchenko_matrix(const TwistedSetup& setup, double tol = kDefaultTolerance) {
  std::vector<TwistedChain> cycles;
  for (std::size_t i = 1; i < setup.size(); ++i) cycles.push_back(reg_pair(setup, i, i - 1));
  return period_matrix(setup, cycles, tol);
}

struct VarchenkoReport {
  cplx lhs;
  cplx rhs;
  cplx det_w;
  double lhs_error = 0.0;
  double magnitude_error = 0.0;  // |lhs| / |rhs| - 1
  cplx phase_ratio;              // (lhs / rhs) / |lhs / rhs|
  double sign = 0.0;             // nearest of +1, -1 to the phase ratio
  double phase_mismatch = 0.0;   // |phase_ratio - sign|
  bool converged = true;
  bool passed = false;
};

/// Numeric determinant of the Varchenko matrix against the Gamma-factor
/// formula. Passes when |magnitude_error| and phase_mismatch are both within
/// check_tol and the sign is kVarchenkoSign.
inline VarchenkoReport varchenko_check(const TwistedSetup& setup, double tol = kDefaultTolerance,
                                       double check_tol = 1e-6) {
  VarchenkoReport r;
  r.rhs = varchenko_rhs(setup);
  const PeriodMatrix app = varchenko_matrix(setup, tol);
  const PeriodMatrix w = wronski_matrix(setup, tol);
  r.lhs = app.determinant();
  r.lhs_error = app.determinant_error();
  r.det_w = w.determinant();
  r.converged = app.converged && w.converged;
  const cplx ratio = r.lhs / r.rhs;
  r.magnitude_error = std::abs(ratio) - 1.0;
  r.phase_ratio = ratio / std::abs(ratio);
  r.sign = r.phase_ratio.real() >= 0.0 ? 1.0 : -1.0;
  r.phase_mismatch = std::abs(r.phase_ratio - r.sign);
  r.passed = r.converged && std::abs(r.magnitude_error) <= check_tol && r.phase_mismatch <= check_tol &&
             r.sign == kVarchenkoSign;
  return r;
}

/// True when one global sign explains every report's phase ratio.
inline bool single_global_sign(const std::vector<VarchenkoReport>& reports, double check_tol = 1e-6) {
  if (reports.empty()) return true;
  for (const auto& r : reports) {
    if (r.sign != reports.front().sign || r.phase_mismatch > check_tol) return false;
  }
  return true;
}

}  // namespace twistcoh
