#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "twistcoh/cohomology.hpp"
#include "twistcoh/form.hpp"

namespace twistcoh {

/// Omega_j for j = 0..n-1, each (n-1) x (n-1). Convention: the period
/// matrix W (rows: cycles, columns: forms) satisfies dW/dx_j = W * Omega_j.
struct ConnectionMatrices {
  std::vector<Eigen::MatrixXcd> omega;

  const Eigen::MatrixXcd& operator[](std::size_t j) const { return omega.at(j); }
  std::size_t size() const { return omega.size(); }
};

/// The form representing the derivative of [eta_k] along x_j:
/// [d/dx_j (1/(t - x_k)) - alpha_j / ((t - x_j)(t - x_k))] dt.
inline RationalOneForm connection_derivative(const TwistedSetup& setup, std::size_t j, std::size_t k) {
  check_index(setup, j);
  check_index(setup, k);
  RationalOneForm out;
  if (j == k) out.coefficient.add_pole(k, 2, 1.0);
  out.coefficient += -setup.exponent(j) * multiply_by_simple_pole(setup, inverse_power(k, 1).terms, j);
  return out;
}

inline ConnectionMatrices connection_matrices(const TwistedSetup& setup) {
  const std::size_t n = setup.size();
  const auto m = static_cast<Eigen::Index>(n - 1);
  ConnectionMatrices out;
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::MatrixXcd omega(m, m);
    for (std::size_t k = 1; k < n; ++k) {
      omega.col(static_cast<Eigen::Index>(k - 1)) = reduce_to_basis(setup, connection_derivative(setup, j, k));
    }
    out.omega.push_back(std::move(omega));
  }
  return out;
}

/// Setup with x_j moved by h; rejects moves that leave the chamber of the
/// original configuration, naming the wall that was crossed.
inline TwistedSetup shifted_in_chamber(const TwistedSetup& setup, std::size_t j, cplx h) {
  check_index(setup, j);
  const std::string move = "moving x_" + std::to_string(j) + " by " + detail::format(h);
  std::vector<cplx> shift(setup.size());
  shift[j] = h;
  const auto before = real_order(setup);
  std::vector<cplx> x = setup.punctures();
  x[j] += h;
  for (std::size_t k = 1; k < before.size(); ++k) {
    const std::size_t a = before[k - 1];
    const std::size_t b = before[k];
    if (x[b].real() - x[a].real() <= kIntegerTolerance) {
      throw Error(ErrorCode::ChamberCrossing,
                  move + " crosses the wall Re x_" + std::to_string(a) + " = Re x_" + std::to_string(b));
    }
  }
  TwistedSetup moved = [&] {
    try {
      return displaced(setup, shift);
    } catch (const Error& e) {
      throw Error(ErrorCode::ChamberCrossing, move + " leaves the configuration space: " + e.detail());
    }
  }();
  if (lateral_order(moved) != lateral_order(setup)) {
    throw Error(ErrorCode::ChamberCrossing, move + " reorders the punctures across the cut direction");
  }
  return moved;
}

struct PfaffianResidual {
  std::size_t j = 0;
  double h = 0.0;
  double residual = 0.0;     // ||dW/dx_j - W Omega_j|| / (||W|| ||Omega_j||)
  double noise_floor = 0.0;  // quadrature error of the difference quotient, same normalization
  bool converged = true;
};

namespace detail {

inline double normalization(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double s = a.norm() * b.norm();
  return s > 0.0 ? s : 1.0;
}

}  // namespace detail

/// Central-difference dW/dx_j compared with W * Omega_j.
inline PfaffianResidual pfaffian_residual(const TwistedSetup& setup, std::size_t j, double h,
                                          double tol = kDefaultTolerance) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const TwistedSetup plus = shifted_in_chamber(setup, j, h);
  const TwistedSetup minus = shifted_in_chamber(setup, j, -h);
  const PeriodMatrix w = wronski_matrix(setup, tol);
  const PeriodMatrix wp = wronski_matrix(plus, tol);
  const PeriodMatrix wm = wronski_matrix(minus, tol);
  const Eigen::MatrixXcd omega = connection_matrices(setup)[j];
  const Eigen::MatrixXcd derivative = (wp.entries - wm.entries) / (2.0 * h);
  const double scale = detail::normalization(w.entries, omega);
  PfaffianResidual r;
  r.j = j;
  r.h = h;
  r.residual = (derivative - w.entries * omega).norm() / scale;
  r.noise_floor = ((wp.errors + wm.errors).norm() / (2.0 * h) + w.errors.norm() * omega.norm()) / scale;
  r.converged = w.converged && wp.converged && wm.converged;
  return r;
}

struct FlatnessReport {
  std::size_t j = 0;
  std::size_t k = 0;
  double h = 0.0;
  double residual = 0.0;            // ||d_k(W Omega_j) - d_j(W Omega_k)|| normalized
  double integrability_residual = 0.0;  // ||d_k Omega_j - d_j Omega_k + [Omega_k, Omega_j]|| normalized
  double noise_floor = 0.0;
};

/// Mixed-partial test of the connection: d_k(W Omega_j) = d_j(W Omega_k).
inline FlatnessReport flatness_check(const TwistedSetup& setup, std::size_t j, std::size_t k, double h,
                                     double tol = kDefaultTolerance) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  check_index(setup, j);
  check_index(setup, k);
  FlatnessReport r;
  r.j = j;
  r.k = k;
  r.h = h;
  if (j == k) return r;

  const TwistedSetup jp = shifted_in_chamber(setup, j, h);
  const TwistedSetup jm = shifted_in_chamber(setup, j, -h);
  const TwistedSetup kp = shifted_in_chamber(setup, k, h);
  const TwistedSetup km = shifted_in_chamber(setup, k, -h);
  const ConnectionMatrices o = connection_matrices(setup);
  const ConnectionMatrices ojp = connection_matrices(jp);
  const ConnectionMatrices ojm = connection_matrices(jm);
  const ConnectionMatrices okp = connection_matrices(kp);
  const ConnectionMatrices okm = connection_matrices(km);

  const Eigen::MatrixXcd dk_omega_j = (okp[j] - okm[j]) / (2.0 * h);
  const Eigen::MatrixXcd dj_omega_k = (ojp[k] - ojm[k]) / (2.0 * h);
  const Eigen::MatrixXcd curvature = dk_omega_j - dj_omega_k + o[k] * o[j] - o[j] * o[k];
  const double omega_scale = o[j].norm() * o[k].norm();
  r.integrability_residual = curvature.norm() / (omega_scale > 0.0 ? omega_scale : 1.0);

  const PeriodMatrix w = wronski_matrix(setup, tol);
  const PeriodMatrix wjp = wronski_matrix(jp, tol);
  const PeriodMatrix wjm = wronski_matrix(jm, tol);
  const PeriodMatrix wkp = wronski_matrix(kp, tol);
  const PeriodMatrix wkm = wronski_matrix(km, tol);
  const Eigen::MatrixXcd dk = (wkp.entries * okp[j] - wkm.entries * okm[j]) / (2.0 * h);
  const Eigen::MatrixXcd dj = (wjp.entries * ojp[k] - wjm.entries * ojm[k]) / (2.0 * h);
  const double scale = w.entries.norm() * (omega_scale > 0.0 ? omega_scale : 1.0);
  r.residual = (dk - dj).norm() / scale;
  r.noise_floor = ((wkp.errors + wkm.errors).norm() * o[j].norm() + (wjp.errors + wjm.errors).norm() * o[k].norm()) /
                  (2.0 * h) / scale;
  return r;
}

/// Steps used by the convergence tables.
inline const std::vector<double>& convergence_steps() {
  static const std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};
  return steps;
}

/// Second-order decay of a residual sequence taken at halving steps: each
/// step must shrink the residual by at least `min_ratio`, unless the finer
/// residual is already within `floor_factor` times its noise floor.
inline bool second_order_decay(const std::vector<double>& residuals, const std::vector<double>& floors,
                               double min_ratio = 3.0, double floor_factor = 10.0) {
  for (std::size_t k = 1; k < residuals.size(); ++k) {
    if (residuals[k] <= floor_factor * floors[k]) continue;
    if (residuals[k - 1] < min_ratio * residuals[k]) return false;
  }
  return true;
}

}  // namespace twistcoh
