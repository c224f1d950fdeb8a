#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "twistcoh/branch.hpp"
#include "twistcoh/chain.hpp"
#include "twistcoh/form.hpp"

namespace twistcoh {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr int kMaxSubdivisionDepth = 40;
inline constexpr std::size_t kMaxEvaluationsPerPiece = 400000;

struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  /// False when the subdivision limit was hit before the tolerance was met;
  /// value and error_estimate then hold the best available result.
  bool converged = true;

  QuadratureResult& accumulate(const QuadratureResult& other, cplx weight) {
    value += weight * other.value;
    error_estimate += std::abs(weight) * other.error_estimate;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
  }
};

struct PieceIntegral {
  QuadratureResult result;
  BranchState end;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double s0;
  double s1;
  BranchState left;
  cplx value;
  double error;
  int depth;
};

class PieceIntegrator {
 public:
  PieceIntegrator(const TwistedSetup& setup, const Piece& piece, const RationalOneForm& form)
      : setup_(setup), piece_(piece), form_(form), center_(arc_center_factor(setup, piece)) {}

  cplx integrand(const BranchState& left, double s_left, double s) const {
    BranchState state = left;
    advance_on_piece(setup_, piece_, center_, state, s_left, s);
    const cplx t = state.anchor;
    return weight_value(setup_, state) * form_(setup_, t) * piece_velocity(piece_, s);
  }

  void evaluate(Interval& iv) {
    const double half = 0.5 * (iv.s1 - iv.s0);
    const double mid = 0.5 * (iv.s0 + iv.s1);
    cplx kronrod{};
    cplx gauss{};
    double absolute = 0.0;
    for (std::size_t k = 0; k < kKronrodNodes.size(); ++k) {
      const double dx = half * kKronrodNodes[k];
      const bool gauss_node = (k % 2 == 1);
      if (dx == 0.0) {
        const cplx f = integrand(iv.left, iv.s0, mid);
        kronrod += kKronrodWeights[k] * f;
        gauss += kGaussWeights[3] * f;
        absolute += kKronrodWeights[k] * std::abs(f);
        continue;
      }
      const cplx f1 = integrand(iv.left, iv.s0, mid - dx);
      const cplx f2 = integrand(iv.left, iv.s0, mid + dx);
      kronrod += kKronrodWeights[k] * (f1 + f2);
      absolute += kKronrodWeights[k] * (std::abs(f1) + std::abs(f2));
      if (gauss_node) gauss += kGaussWeights[k / 2] * (f1 + f2);
    }
    evaluations_ += 15;
    iv.value = half * kronrod;
    const double rounding = 50.0 * std::numeric_limits<double>::epsilon() * half * absolute;
    iv.error = std::max(std::abs(half * (kronrod - gauss)), rounding);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const TwistedSetup& setup_;
  const Piece& piece_;
  const RationalOneForm& form_;
  std::optional<std::size_t> center_;
  std::size_t evaluations_ = 0;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of weight * form over one piece, starting
/// from the given branch. The worst interval is bisected until the summed
/// embedded-rule error drops below tol * max(1, |value|). The branch is
/// carried continuously through every subdivision point.
inline PieceIntegral integrate_piece(const TwistedSetup& setup, const Piece& piece,
                                     const BranchState& start_branch, const RationalOneForm& form,
                                     double tol = kDefaultTolerance) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (std::abs(start_branch.anchor - piece_start(piece)) > setup.point_tolerance()) {
    throw Error(ErrorCode::InvalidArgument, "branch anchor is not the piece's initial point");
  }
  PieceIntegral out{QuadratureResult{}, start_branch};
  if (piece_length(piece) == 0.0) return out;
  for (cplx x : setup.punctures()) {
    if (distance_to_point(piece, x) < setup.safety_radius()) {
      throw Error(ErrorCode::PathHitsPuncture, "piece passes within the safety radius of " + detail::format(x));
    }
  }
  check_form(setup, form.coefficient);

  detail::PieceIntegrator integrator(setup, piece, form);
  const auto center = detail::arc_center_factor(setup, piece);
  const auto nodes = tracking_nodes(setup, piece);

  std::vector<detail::Interval> intervals;
  BranchState state = start_branch;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    detail::Interval iv{nodes[k - 1], nodes[k], state, {}, 0.0, 0};
    integrator.evaluate(iv);
    intervals.push_back(std::move(iv));
    advance_on_piece(setup, piece, center, state, nodes[k - 1], nodes[k]);
  }
  out.end = std::move(state);

  auto totals = [&] {
    cplx value{};
    double error = 0.0;
    for (const auto& iv : intervals) {
      value += iv.value;
      error += iv.error;
    }
    return std::pair{value, error};
  };

  bool converged = true;
  for (;;) {
    const auto [value, error] = totals();
    if (error <= tol * std::max(1.0, std::abs(value))) break;
    auto worst = std::max_element(intervals.begin(), intervals.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    if (worst->depth >= kMaxSubdivisionDepth || integrator.evaluations() >= kMaxEvaluationsPerPiece) {
      converged = false;
      break;
    }
    const double mid = 0.5 * (worst->s0 + worst->s1);
    BranchState mid_state = worst->left;
    advance_on_piece(setup, piece, center, mid_state, worst->s0, mid);
    detail::Interval right{mid, worst->s1, std::move(mid_state), {}, 0.0, worst->depth + 1};
    worst->s1 = mid;
    worst->depth += 1;
    integrator.evaluate(*worst);
    integrator.evaluate(right);
    intervals.insert(worst + 1, std::move(right));
  }

  const auto [value, error] = totals();
  out.result = QuadratureResult{value, error, integrator.evaluations(), converged};
  return out;
}

/// Integral over path (x) branch: pieces in order, branch carried along.
inline QuadratureResult integrate_path(const TwistedSetup& setup, const ContourPath& path,
                                       const BranchState& branch, const RationalOneForm& form,
                                       double tol = kDefaultTolerance) {
  if (std::abs(branch.anchor - path.start()) > setup.point_tolerance()) {
    throw Error(ErrorCode::InvalidArgument, "branch anchor is not the path's initial point");
  }
  QuadratureResult total;
  BranchState state = branch;
  for (const Piece& piece : path.pieces()) {
    PieceIntegral part = integrate_piece(setup, piece, state, form, tol);
    total.accumulate(part.result, 1.0);
    state = std::move(part.end);
  }
  return total;
}

/// Pairing of a twisted chain with weight * form: coefficient-weighted sum of
/// path integrals, error estimates added with |coefficient| weights.
inline QuadratureResult integrate_chain(const TwistedSetup& setup, const TwistedChain& chain,
                                        const RationalOneForm& form, double tol = kDefaultTolerance) {
  QuadratureResult total;
  for (const ChainTerm& term : chain.terms) {
    total.accumulate(integrate_path(setup, term.path, term.branch, form, tol), term.coefficient);
  }
  return total;
}

}  // namespace twistcoh
