#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "twistcoh/branch.hpp"
#include "twistcoh/chain.hpp"
#include "twistcoh/form.hpp"
#include "twistcoh/quadrature.hpp"

namespace twistcoh {

/// Path from the base point to t inside U_i: down to the routing line (at
/// `depth` below the highway), across to the lateral position of t, then
/// straight up. Punctures met on the way up are passed on a circular detour
/// on the side of t, so no foreign cut is touched.
inline ContourPath default_path(const TwistedSetup& setup, std::size_t i, cplx t, double depth = 0.0) {
  check_index(setup, i);
  if (!in_region(setup, Region::of(i), t)) {
    throw Error(ErrorCode::PointOutsideRegion, detail::format(t) + " is not in U_" + std::to_string(i));
  }
  const cplx zp = setup.to_frame(setup.base_point());
  const cplx zt = setup.to_frame(t);
  const double road = std::min(setup.highway_height() - depth, zt.imag());

  ContourPath path(setup.base_point());
  path.line_to(setup.from_frame(cplx(zp.real(), road)));
  path.line_to(setup.from_frame(cplx(zt.real(), road)));

  // Punctures below t that lie close to the ascent line, lowest first.
  struct Obstacle {
    std::size_t j;
    cplx z;
    double radius;
  };
  std::vector<Obstacle> obstacles;
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const cplx zj = setup.to_frame(setup.puncture(j));
    if (zj.imag() >= zt.imag()) continue;
    double radius = std::min(0.25 * setup.min_gap(), 0.5 * std::abs(t - setup.puncture(j)));
    for (std::size_t k = 0; k < setup.size(); ++k) {
      if (k == j) continue;
      radius = std::min(radius, 0.5 * std::abs(setup.lateral(setup.puncture(k)) - zj.real()));
    }
    if (std::abs(zt.real() - zj.real()) < radius) obstacles.push_back({j, zj, radius});
  }
  std::sort(obstacles.begin(), obstacles.end(),
            [](const Obstacle& a, const Obstacle& b) { return a.z.imag() < b.z.imag(); });

  for (const Obstacle& ob : obstacles) {
    const double dx = zt.real() - ob.z.real();
    const double dy = std::sqrt(ob.radius * ob.radius - dx * dx);
    const cplx below = setup.from_frame(cplx(zt.real(), ob.z.imag() - dy));
    path.line_to(below);
    // Angles in the frame, measured from the puncture; the detour keeps to
    // the side of t (the right side when t sits exactly above x_j).
    const double lower = std::atan2(-dy, dx);
    const double upper = std::atan2(dy, dx);
    const double from = lower - setup.frame_angle();
    const double sweep = dx >= 0.0 ? upper - lower : -((lower + kTwoPi) - upper);
    path.arc(setup.puncture(ob.j), ob.radius, from, from + sweep);
  }
  path.line_to(t);
  return path;
}

struct SolutionEvaluation {
  cplx point;
  cplx value;
  ContourPath path;
  double error_estimate = 0.0;
  bool converged = true;
};

/// g(t) = s_gamma(t)^{-1} * (pairing of reg_i gamma with weight * form) for a
/// given path gamma from the base point to t in U_i.
inline SolutionEvaluation solve_along(const TwistedSetup& setup, std::size_t i, const RationalOneForm& form,
                                      const ContourPath& gamma, double tol = kDefaultTolerance,
                                      double radius_scale = 1.0) {
  const TwistedChain chain = regularize(setup, gamma, i, radius_scale);
  const QuadratureResult q = integrate_chain(setup, chain, form, tol);
  const BranchState at_t = continue_along(setup, gamma, principal_branch(setup, setup.base_point()));
  const cplx weight = weight_value(setup, at_t);
  return {gamma.end(), q.value / weight, gamma, q.error_estimate / std::abs(weight), q.converged};
}

/// Single-valued solution of (d + omega) g = form on U_i, evaluated at t.
inline SolutionEvaluation solve_at(const TwistedSetup& setup, std::size_t i, const RationalOneForm& form,
                                   cplx t, double tol = kDefaultTolerance) {
  return solve_along(setup, i, form, default_path(setup, i, t), tol);
}

struct PathIndependenceReport {
  SolutionEvaluation primary;
  SolutionEvaluation looped;     // sigma_i followed by the default path
  SolutionEvaluation detoured;   // contractible variation through a lower routing line
  double looped_discrepancy = 0.0;
  double detoured_discrepancy = 0.0;
  double looped_bound = 0.0;     // 10 x combined error estimates
  double detoured_bound = 0.0;
  bool passed = false;
};

inline PathIndependenceReport path_independence_check(const TwistedSetup& setup, std::size_t i,
                                                       const RationalOneForm& form, cplx t,
                                                       double tol = kDefaultTolerance) {
  PathIndependenceReport r;
  const ContourPath gamma = default_path(setup, i, t);
  r.primary = solve_along(setup, i, form, gamma, tol);
  r.looped = solve_along(setup, i, form, loop_around(setup, i).then(gamma), tol);
  r.detoured = solve_along(setup, i, form, default_path(setup, i, t, setup.diameter()), tol);
  r.looped_discrepancy = std::abs(r.primary.value - r.looped.value);
  r.detoured_discrepancy = std::abs(r.primary.value - r.detoured.value);
  r.looped_bound = 10.0 * (r.primary.error_estimate + r.looped.error_estimate);
  r.detoured_bound = 10.0 * (r.primary.error_estimate + r.detoured.error_estimate);
  r.passed = r.looped_discrepancy <= r.looped_bound && r.detoured_discrepancy <= r.detoured_bound;
  return r;
}

struct ResidualReport {
  double h = 0.0;
  cplx value;
  double residual = 0.0;    // max of the two directional residuals
  double residual_x = 0.0;  // derivative from t +- h
  double residual_y = 0.0;  // derivative from t +- i h
  double noise_floor = 0.0; // quadrature error carried through the difference quotient
};

/// |g'(t) + omega(t) g(t) - eta(t)| with g' from central differences of
/// solve_at along the real and the imaginary direction separately.
inline ResidualReport residual_check(const TwistedSetup& setup, std::size_t i, const RationalOneForm& form,
                                     cplx t, double h, double tol = kDefaultTolerance) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const std::vector<cplx> points = {t, t + h, t - h, t + cplx(0.0, h), t - cplx(0.0, h)};
  for (cplx s : points) {
    if (!in_region(setup, Region::of(i), s)) {
      throw Error(ErrorCode::StencilLeavesRegion, detail::format(s) + " is not in U_" + std::to_string(i));
    }
  }
  for (const Piece& arm : {Piece{Segment{t - h, t + h}}, Piece{Segment{t - cplx(0.0, h), t + cplx(0.0, h)}}}) {
    for (std::size_t j = 0; j < setup.size(); ++j) {
      if (j != i && crosses_cut(setup, arm, j)) {
        throw Error(ErrorCode::StencilLeavesRegion, "stencil meets l_" + std::to_string(j));
      }
    }
  }
  std::vector<SolutionEvaluation> g(points.size());
  parallel_for(points.size(), [&](std::size_t k) { g[k] = solve_at(setup, i, form, points[k], tol); });

  const cplx omega = connection_form(setup)(setup, t);
  const cplx eta = form(setup, t);
  const cplx dx = (g[1].value - g[2].value) / (2.0 * h);
  const cplx dy = (g[3].value - g[4].value) / cplx(0.0, 2.0 * h);
  ResidualReport r;
  r.h = h;
  r.value = g[0].value;
  r.residual_x = std::abs(dx + omega * g[0].value - eta);
  r.residual_y = std::abs(dy + omega * g[0].value - eta);
  r.residual = std::max(r.residual_x, r.residual_y);
  r.noise_floor = std::max(g[1].error_estimate + g[2].error_estimate, g[3].error_estimate + g[4].error_estimate) /
                      (2.0 * h) +
                  std::abs(omega) * g[0].error_estimate;
  return r;
}

}  // namespace twistcoh
