#pragma once

#include <cmath>
#include <vector>

#include "twistcoh/branch.hpp"
#include "twistcoh/path.hpp"
#include "twistcoh/setup.hpp"

namespace twistcoh {

/// Coefficients at or below this magnitude are dropped when chains are
/// simplified.
inline constexpr double kChainDropTolerance = 1e-14;

/// coefficient * (path (x) branch), the branch being given at the path's
/// initial point.
struct ChainTerm {
  cplx coefficient;
  ContourPath path;
  BranchState branch;
};

/// Formal complex-linear combination of paths loaded with branches of the
/// weight (a chain with coefficients in the dual local system).
struct TwistedChain {
  std::vector<ChainTerm> terms;

  bool empty() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
};

/// Point term of a twisted boundary.
struct BoundaryTerm {
  cplx point;
  cplx coefficient;
  BranchState branch;
};

/// Continuation without the safety-radius check; used for bookkeeping on
/// chains whose carriers were already validated or are never integrated.
inline BranchState track(const TwistedSetup& setup, const ContourPath& path, BranchState state) {
  for (const Piece& p : path.pieces()) state = continue_along_piece(setup, p, std::move(state));
  return state;
}

/// Stadium loop sigma_i: descend from the base point to the routing line,
/// run along it below x_i, climb to the circle of the given radius, go once
/// counterclockwise around x_i, and return the same way.
inline ContourPath loop_around(const TwistedSetup& setup, std::size_t i, cplx basepoint, double radius) {
  check_index(setup, i);
  if (!in_region(setup, Region::all(), basepoint)) {
    throw Error(ErrorCode::BasepointOnCut, detail::format(basepoint) + " is not in U");
  }
  const double clearance = setup.clearance(i);
  if (!(radius < 0.5 * clearance)) {
    throw Error(ErrorCode::RadiusTooLarge, "radius " + std::to_string(radius) +
                                               " must be below half the clearance " +
                                               std::to_string(clearance) + " of x_" + std::to_string(i));
  }
  if (!(radius >= setup.safety_radius())) {
    throw Error(ErrorCode::InvalidArgument, "loop radius below the safety radius");
  }
  const cplx center = setup.puncture(i);
  const cplx zp = setup.to_frame(basepoint);
  const double road = std::min(setup.highway_height(), zp.imag());
  const cplx corner_below_p = setup.from_frame(cplx(zp.real(), road));
  const cplx corner_below_x = setup.from_frame(cplx(setup.lateral(center), road));
  const double entry_angle = -kPi / 2.0 - setup.frame_angle();

  ContourPath out(basepoint);
  out.line_to(corner_below_p).line_to(corner_below_x).line_to(center + std::polar(radius, entry_angle));
  ContourPath loop = out;
  loop.arc(center, radius, entry_angle, entry_angle + kTwoPi);
  const ContourPath back = out.reversed();
  for (const Piece& p : back.pieces()) {
    if (const auto* seg = std::get_if<Segment>(&p)) {
      loop.line_to(seg->to);
    }
  }
  return loop;
}

inline ContourPath loop_around(const TwistedSetup& setup, std::size_t i) {
  return loop_around(setup, i, setup.base_point(), setup.default_loop_radius(i));
}

/// reg_i gamma = gamma (x) s_gamma + 1/(c_i - 1) sigma_i (x) s_sigma, both
/// branches being the fixed branch at the base point. radius_scale multiplies
/// the default loop radius.
inline TwistedChain regularize(const TwistedSetup& setup, const ContourPath& gamma, std::size_t i,
                               double radius_scale = 1.0) {
  check_index(setup, i);
  const cplx p = setup.base_point();
  if (std::abs(gamma.start() - p) > setup.point_tolerance()) {
    throw Error(ErrorCode::InvalidArgument, "path must start at the base point");
  }
  if (!path_in_region(setup, Region::of(i), gamma)) {
    throw Error(ErrorCode::PathLeavesRegion, "path leaves U_" + std::to_string(i));
  }
  const BranchState base = principal_branch(setup, p);
  const ContourPath sigma = loop_around(setup, i, p, radius_scale * setup.default_loop_radius(i));
  const cplx c = setup.monodromy()[i];
  TwistedChain chain;
  chain.terms.push_back({cplx(1.0, 0.0), gamma, base});
  chain.terms.push_back({1.0 / (c - 1.0), sigma, base});
  return chain;
}

/// reg(i,j) = 1/(c_i - 1) sigma_i - 1/(c_j - 1) sigma_j with loops based at
/// the setup's base point. Homologous to a path from x_i to x_j.
inline TwistedChain reg_pair(const TwistedSetup& setup, std::size_t i, std::size_t j,
                             double radius_scale = 1.0) {
  check_index(setup, i);
  check_index(setup, j);
  if (i == j) throw Error(ErrorCode::InvalidArgument, "reg_pair needs distinct indices");
  const cplx p = setup.base_point();
  const BranchState base = principal_branch(setup, p);
  TwistedChain chain;
  chain.terms.push_back({1.0 / (setup.monodromy()[i] - 1.0),
                         loop_around(setup, i, p, radius_scale * setup.default_loop_radius(i)), base});
  chain.terms.push_back({-1.0 / (setup.monodromy()[j] - 1.0),
                         loop_around(setup, j, p, radius_scale * setup.default_loop_radius(j)), base});
  return chain;
}

/// Regularization of the straight segment from x_a to x_b: the segment
/// shortened by `radius` at both ends, closed off by full circles around the
/// endpoints weighted so the twisted boundary vanishes. The radius is not
/// bound by the safety radius; such chains are meant for scanning.
inline TwistedChain reg_segment(const TwistedSetup& setup, std::size_t a, std::size_t b, double radius) {
  check_index(setup, a);
  check_index(setup, b);
  if (a == b) throw Error(ErrorCode::InvalidArgument, "reg_segment needs distinct indices");
  const cplx xa = setup.puncture(a);
  const cplx xb = setup.puncture(b);
  const double len = std::abs(xb - xa);
  const double limit = 0.5 * std::min({setup.clearance(a), setup.clearance(b), 0.5 * len});
  if (!(radius > 0.0 && radius < limit)) {
    throw Error(ErrorCode::RadiusTooLarge, "segment loop radius must lie in (0, " + std::to_string(limit) + ")");
  }
  const cplx dir = (xb - xa) / len;
  const double angle_a = std::arg(dir);
  const double angle_b = std::arg(-dir);
  const cplx start = xa + std::polar(radius, angle_a);
  const cplx finish = xb + std::polar(radius, angle_b);

  ContourPath segment(start);
  segment.line_to(finish);
  for (std::size_t j = 0; j < setup.size(); ++j) {
    if (j != a && j != b && crosses_cut(setup, segment.pieces().front(), j)) {
      throw Error(ErrorCode::PathLeavesRegion,
                  "segment from x_" + std::to_string(a) + " to x_" + std::to_string(b) + " meets l_" +
                      std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < setup.size(); ++j) {
    if (j != a && j != b && distance_to_point(segment, setup.puncture(j)) <= radius) {
      throw Error(ErrorCode::PathLeavesRegion, "segment passes through x_" + std::to_string(j));
    }
  }

  const BranchState at_start = principal_branch(setup, start);
  const BranchState at_finish = track(setup, segment, at_start);

  ContourPath circle_a(start);
  circle_a.arc(xa, radius, angle_a, angle_a + kTwoPi);
  ContourPath circle_b(finish);
  circle_b.arc(xb, radius, angle_b, angle_b + kTwoPi);

  TwistedChain chain;
  chain.terms.push_back({1.0 / (setup.monodromy()[a] - 1.0), circle_a, at_start});
  chain.terms.push_back({cplx(1.0, 0.0), segment, at_start});
  chain.terms.push_back({-1.0 / (setup.monodromy()[b] - 1.0), circle_b, at_finish});
  return chain;
}

namespace detail {

/// Adds coefficient * (piece (x) branch) to the normalized term list,
/// merging with a structurally equal piece whose branch differs by a
/// monodromy factor.
inline void accumulate_piece(const TwistedSetup& setup, std::vector<ChainTerm>& out, cplx coefficient,
                             const Piece& piece, const BranchState& branch) {
  const double tol = setup.point_tolerance();
  for (ChainTerm& term : out) {
    if (!structurally_equal(term.path.pieces().front(), piece, tol)) continue;
    if (const auto factor = monodromy_between(setup, term.branch, branch)) {
      term.coefficient += coefficient * *factor;
      return;
    }
  }
  ContourPath path(piece_start(piece));
  path.append(piece);
  out.push_back({coefficient, std::move(path), branch});
}

inline void accumulate_point(const TwistedSetup& setup, std::vector<BoundaryTerm>& out, cplx coefficient,
                             const BranchState& branch) {
  for (BoundaryTerm& term : out) {
    if (const auto factor = monodromy_between(setup, term.branch, branch)) {
      term.coefficient += coefficient * *factor;
      return;
    }
  }
  out.push_back({branch.anchor, coefficient, branch});
}

}  // namespace detail

/// lambda * a + mu * b in normal form: every term is split into elementary
/// pieces carrying their continued branch, pieces are put in canonical
/// orientation (a reversed piece is minus the forward one), equal pieces are
/// merged with monodromy bookkeeping, and negligible coefficients dropped.
inline TwistedChain chain_combine(const TwistedSetup& setup, const TwistedChain& a, const TwistedChain& b,
                                  cplx lambda, cplx mu) {
  std::vector<ChainTerm> out;
  auto absorb = [&](const TwistedChain& chain, cplx scale) {
    if (scale == cplx{}) return;
    for (const ChainTerm& term : chain.terms) {
      BranchState state = term.branch;
      for (const Piece& piece : term.path.pieces()) {
        BranchState next = continue_along_piece(setup, piece, state);
        if (piece_length(piece) > 0.0) {
          if (is_canonical(piece)) {
            detail::accumulate_piece(setup, out, scale * term.coefficient, piece, state);
          } else {
            detail::accumulate_piece(setup, out, -scale * term.coefficient, reversed(piece), next);
          }
        }
        state = std::move(next);
      }
    }
  };
  absorb(a, lambda);
  absorb(b, mu);
  TwistedChain result;
  for (ChainTerm& term : out) {
    if (std::abs(term.coefficient) > kChainDropTolerance) result.terms.push_back(std::move(term));
  }
  return result;
}

inline TwistedChain simplify(const TwistedSetup& setup, const TwistedChain& chain) {
  return chain_combine(setup, chain, TwistedChain{}, cplx(1.0, 0.0), cplx{});
}

/// Twisted boundary: each term contributes c (end (x) continued branch) -
/// c (start (x) branch); contributions at one point whose branches differ by
/// monodromy are merged.
inline std::vector<BoundaryTerm> twisted_boundary(const TwistedSetup& setup, const TwistedChain& chain) {
  std::vector<BoundaryTerm> out;
  for (const ChainTerm& term : chain.terms) {
    const BranchState finish = track(setup, term.path, term.branch);
    detail::accumulate_point(setup, out, term.coefficient, finish);
    detail::accumulate_point(setup, out, -term.coefficient, term.branch);
  }
  std::vector<BoundaryTerm> kept;
  for (BoundaryTerm& t : out) {
    if (std::abs(t.coefficient) > kChainDropTolerance) kept.push_back(std::move(t));
  }
  return kept;
}

/// Number of equal subdivisions per piece scanned by branch_extremum.
inline constexpr std::size_t kExtremumSamplesPerPiece = 64;

/// Value of the tracked branch of (t - x_j)^{alpha_j} at the carrier point
/// where its modulus is largest. Every piece of every term is scanned at
/// kExtremumSamplesPerPiece equal steps plus its tracking nodes; the first
/// maximum found wins.
inline cplx branch_extremum(const TwistedSetup& setup, std::size_t j, const TwistedChain& chain) {
  check_index(setup, j);
  if (chain.empty()) throw Error(ErrorCode::EmptyChain, "branch_extremum of an empty chain");
  double best = -1.0;
  cplx best_value{};
  auto consider = [&](const BranchState& state) {
    const cplx v = factor_value(setup, state, j);
    if (std::abs(v) > best) {
      best = std::abs(v);
      best_value = v;
    }
  };
  for (const ChainTerm& term : chain.terms) {
    BranchState state = term.branch;
    consider(state);
    for (const Piece& piece : term.path.pieces()) {
      const auto center = detail::arc_center_factor(setup, piece);
      std::vector<double> nodes = tracking_nodes(setup, piece);
      for (std::size_t k = 1; k < kExtremumSamplesPerPiece; ++k) {
        nodes.push_back(static_cast<double>(k) / static_cast<double>(kExtremumSamplesPerPiece));
      }
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      for (std::size_t k = 1; k < nodes.size(); ++k) {
        advance_on_piece(setup, piece, center, state, nodes[k - 1], nodes[k]);
        consider(state);
      }
    }
  }
  return best_value;
}

}  // namespace twistcoh
