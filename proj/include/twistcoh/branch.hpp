#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "twistcoh/path.hpp"
#include "twistcoh/setup.hpp"

namespace twistcoh {

/// A determination of the multivalued weight prod_j (t - x_j)^{alpha_j} at the
/// anchor point: one continuously tracked argument and one log-modulus per
/// factor. The weight's branch is a pure function of this state.
struct BranchState {
  cplx anchor{};
  std::vector<double> args;
  std::vector<double> logmods;
};

/// The fixed branch on U: each arg(t - x_j) lies in (cut - 2 pi, cut), so the
/// discontinuity of factor j sits exactly on its cut ray.
inline BranchState principal_branch(const TwistedSetup& setup, cplx t) {
  if (is_puncture(setup, t)) throw Error(ErrorCode::PointIsPuncture, detail::format(t));
  for (std::size_t j = 0; j < setup.size(); ++j) {
    if (on_cut(setup, t, j)) {
      throw Error(ErrorCode::PointOnCut, detail::format(t) + " lies on l_" + std::to_string(j));
    }
  }
  const double cut = setup.cut_direction();
  BranchState state{t, std::vector<double>(setup.size()), std::vector<double>(setup.size())};
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const cplx d = t - setup.puncture(j);
    double a = std::arg(d);
    // Shift into (cut - 2 pi, cut].
    a -= kTwoPi * std::ceil((a - cut) / kTwoPi);
    if (a <= cut - kTwoPi) a += kTwoPi;
    state.args[j] = a;
    state.logmods[j] = std::log(std::abs(d));
  }
  return state;
}

namespace detail {

/// Moves the state to t_new in one step. Each arg increment is the principal
/// argument of the ratio of consecutive differences; the caller guarantees
/// the step is small enough for this to be the continuous increment. If
/// exact_center names a factor, its increment is replaced by exact_sweep.
inline void advance(const TwistedSetup& setup, BranchState& state, cplx t_new,
                    std::optional<std::size_t> exact_center = std::nullopt,
                    double exact_sweep = 0.0) {
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const cplx x = setup.puncture(j);
    if (exact_center && *exact_center == j) {
      state.args[j] += exact_sweep;
    } else {
      state.args[j] += std::arg((t_new - x) / (state.anchor - x));
    }
    state.logmods[j] = std::log(std::abs(t_new - x));
  }
  state.anchor = t_new;
}

/// Index of the puncture at the arc center, if any.
inline std::optional<std::size_t> arc_center_factor(const TwistedSetup& setup, const Piece& piece) {
  const auto* arc = std::get_if<Arc>(&piece);
  if (!arc) return std::nullopt;
  for (std::size_t j = 0; j < setup.size(); ++j) {
    if (std::abs(arc->center - setup.puncture(j)) <= 1e-14 * setup.scale()) return j;
  }
  return std::nullopt;
}

inline double arg_increment(cplx from, cplx to, cplx x) { return std::arg((to - x) / (from - x)); }

inline void refine_nodes(const TwistedSetup& setup, const Piece& piece,
                         std::optional<std::size_t> center, double s0, double s1, int depth,
                         std::vector<double>& nodes) {
  constexpr double kMaxIncrement = kPi / 4.0;
  const cplx t0 = piece_point(piece, s0);
  const cplx t1 = piece_point(piece, s1);
  const double sm = 0.5 * (s0 + s1);
  const cplx tm = piece_point(piece, sm);
  bool split = false;
  for (std::size_t j = 0; j < setup.size() && !split; ++j) {
    if (center && *center == j) continue;
    const cplx x = setup.puncture(j);
    const double whole = arg_increment(t0, t1, x);
    const double halves = arg_increment(t0, tm, x) + arg_increment(tm, t1, x);
    split = std::abs(whole) >= kMaxIncrement || std::abs(whole - halves) > 1e-9;
  }
  if (split && depth < 60) {
    refine_nodes(setup, piece, center, s0, sm, depth + 1, nodes);
    refine_nodes(setup, piece, center, sm, s1, depth + 1, nodes);
  } else {
    nodes.push_back(s1);
  }
}

}  // namespace detail

/// Parameter values 0 = s_0 < ... < s_m = 1 splitting the piece into steps on
/// which every arg(t - x_j) changes by less than pi/4. Arcs are first cut into
/// sub-arcs of at most pi/4.
inline std::vector<double> tracking_nodes(const TwistedSetup& setup, const Piece& piece) {
  const auto center = detail::arc_center_factor(setup, piece);
  std::size_t initial = 1;
  if (const auto* arc = std::get_if<Arc>(&piece)) {
    initial = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::abs(arc->theta_to - arc->theta_from) / (kPi / 4.0))));
  }
  std::vector<double> nodes{0.0};
  for (std::size_t k = 0; k < initial; ++k) {
    const double s0 = static_cast<double>(k) / static_cast<double>(initial);
    const double s1 = static_cast<double>(k + 1) / static_cast<double>(initial);
    detail::refine_nodes(setup, piece, center, s0, s1, 0, nodes);
  }
  nodes.back() = 1.0;
  return nodes;
}

/// Moves state along the piece from parameter s_from to s_to (s_from <= s_to
/// within one tracking step).
inline void advance_on_piece(const TwistedSetup& setup, const Piece& piece,
                             std::optional<std::size_t> center, BranchState& state, double s_from,
                             double s_to) {
  double sweep = 0.0;
  if (const auto* arc = std::get_if<Arc>(&piece)) sweep = (s_to - s_from) * (arc->theta_to - arc->theta_from);
  const cplx t = s_to == 1.0 ? piece_end(piece) : piece_point(piece, s_to);
  detail::advance(setup, state, t, center, sweep);
}

inline BranchState continue_along_piece(const TwistedSetup& setup, const Piece& piece,
                                        BranchState state) {
  const auto center = detail::arc_center_factor(setup, piece);
  const auto nodes = tracking_nodes(setup, piece);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    advance_on_piece(setup, piece, center, state, nodes[k - 1], nodes[k]);
  }
  return state;
}

inline void require_clearance(const TwistedSetup& setup, const ContourPath& path) {
  const double clearance = puncture_clearance(setup, path);
  if (clearance < setup.safety_radius()) {
    throw Error(ErrorCode::PathHitsPuncture,
                "path passes within " + std::to_string(clearance) + " of a puncture (safety radius " +
                    std::to_string(setup.safety_radius()) + ")");
  }
}

/// Analytic continuation of the branch `start` along the path.
inline BranchState continue_along(const TwistedSetup& setup, const ContourPath& path,
                                  const BranchState& start) {
  if (std::abs(start.anchor - path.start()) > setup.point_tolerance()) {
    throw Error(ErrorCode::InvalidArgument, "branch anchor is not the path's initial point");
  }
  require_clearance(setup, path);
  BranchState state = start;
  for (const Piece& p : path.pieces()) state = continue_along_piece(setup, p, std::move(state));
  return state;
}

/// Value of the tracked branch of (t - x_j)^{alpha_j}.
inline cplx factor_value(const TwistedSetup& setup, const BranchState& state, std::size_t j) {
  return std::exp(setup.exponent(j) * cplx(state.logmods.at(j), state.args.at(j)));
}

/// The number the weight takes for this branch state.
inline cplx weight_value(const TwistedSetup& setup, const BranchState& state) {
  cplx log_value{};
  for (std::size_t j = 0; j < setup.size(); ++j) {
    log_value += setup.exponent(j) * cplx(state.logmods[j], state.args[j]);
  }
  return std::exp(log_value);
}

/// If a and b are branches at the same point differing by whole turns around
/// the punctures, returns the monodromy factor m with weight(b) = m weight(a).
inline std::optional<cplx> monodromy_between(const TwistedSetup& setup, const BranchState& a,
                                             const BranchState& b) {
  if (std::abs(a.anchor - b.anchor) > setup.point_tolerance()) return std::nullopt;
  cplx factor{1.0, 0.0};
  for (std::size_t j = 0; j < setup.size(); ++j) {
    const double turns = (b.args[j] - a.args[j]) / kTwoPi;
    const double k = std::round(turns);
    if (std::abs(turns - k) > 1e-9) return std::nullopt;
    if (k != 0.0) factor *= std::pow(setup.monodromy()[j], k);
  }
  return factor;
}

}  // namespace twistcoh
