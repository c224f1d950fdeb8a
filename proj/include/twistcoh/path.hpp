#pragma once

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "twistcoh/setup.hpp"

namespace twistcoh {

struct Segment {
  cplx from;
  cplx to;
};

/// Circular arc t = center + radius * exp(i theta), theta running from
/// theta_from to theta_to (counterclockwise when theta_to > theta_from).
struct Arc {
  cplx center;
  double radius;
  double theta_from;
  double theta_to;
};

using Piece = std::variant<Segment, Arc>;

inline cplx piece_point(const Piece& piece, double s) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return seg->from + s * (seg->to - seg->from);
  const auto& arc = std::get<Arc>(piece);
  return arc.center + std::polar(arc.radius, arc.theta_from + s * (arc.theta_to - arc.theta_from));
}

/// dt/ds for the unit-interval parameterization.
inline cplx piece_velocity(const Piece& piece, double s) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return seg->to - seg->from;
  const auto& arc = std::get<Arc>(piece);
  const double sweep = arc.theta_to - arc.theta_from;
  const double theta = arc.theta_from + s * sweep;
  return cplx(0.0, sweep) * std::polar(arc.radius, theta);
}

inline cplx piece_start(const Piece& piece) { return piece_point(piece, 0.0); }

inline cplx piece_end(const Piece& piece) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return seg->to;
  return piece_point(piece, 1.0);
}

inline double piece_length(const Piece& piece) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return std::abs(seg->to - seg->from);
  const auto& arc = std::get<Arc>(piece);
  return arc.radius * std::abs(arc.theta_to - arc.theta_from);
}

inline Piece reversed(const Piece& piece) {
  if (const auto* seg = std::get_if<Segment>(&piece)) return Segment{seg->to, seg->from};
  const auto& arc = std::get<Arc>(piece);
  return Arc{arc.center, arc.radius, arc.theta_to, arc.theta_from};
}

/// Canonical orientation used when chains are normalized: segments run from
/// the lexicographically smaller endpoint, arcs run counterclockwise.
inline bool is_canonical(const Piece& piece) {
  if (const auto* seg = std::get_if<Segment>(&piece)) {
    if (seg->from.real() != seg->to.real()) return seg->from.real() < seg->to.real();
    return seg->from.imag() <= seg->to.imag();
  }
  const auto& arc = std::get<Arc>(piece);
  return arc.theta_to >= arc.theta_from;
}

inline bool structurally_equal(const Piece& a, const Piece& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* sa = std::get_if<Segment>(&a)) {
    const auto& sb = std::get<Segment>(b);
    return std::abs(sa->from - sb.from) <= tol && std::abs(sa->to - sb.to) <= tol;
  }
  const auto& aa = std::get<Arc>(a);
  const auto& ab = std::get<Arc>(b);
  return std::abs(aa.center - ab.center) <= tol && std::abs(aa.radius - ab.radius) <= tol &&
         std::abs(aa.theta_from - ab.theta_from) <= 1e-12 &&
         std::abs(aa.theta_to - ab.theta_to) <= 1e-12;
}

namespace detail {

/// Angle theta measured along the arc direction from theta_from, reduced into
/// [0, 2 pi). Returns true if it falls inside the swept range.
inline bool angle_on_arc(const Arc& arc, double theta) {
  const double sweep = arc.theta_to - arc.theta_from;
  if (std::abs(sweep) >= kTwoPi) return true;
  double offset = sweep >= 0.0 ? theta - arc.theta_from : arc.theta_from - theta;
  offset = std::fmod(offset, kTwoPi);
  if (offset < 0.0) offset += kTwoPi;
  return offset <= std::abs(sweep);
}

}  // namespace detail

inline double distance_to_point(const Piece& piece, cplx x) {
  if (const auto* seg = std::get_if<Segment>(&piece)) {
    const cplx d = seg->to - seg->from;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(x - seg->from);
    const double s = std::clamp(((x - seg->from) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(x - (seg->from + s * d));
  }
  const auto& arc = std::get<Arc>(piece);
  const cplx rel = x - arc.center;
  const double dist_center = std::abs(rel);
  if (dist_center > 0.0 && detail::angle_on_arc(arc, std::arg(rel))) {
    return std::abs(dist_center - arc.radius);
  }
  if (dist_center == 0.0) return arc.radius;
  return std::min(std::abs(x - piece_start(piece)), std::abs(x - piece_end(piece)));
}

/// Whether the piece meets the cut ray l_j (touching counts).
inline bool crosses_cut(const TwistedSetup& setup, const Piece& piece, std::size_t j) {
  const double tol = setup.point_tolerance();
  const cplx root = setup.to_frame(setup.puncture(j));
  if (const auto* seg = std::get_if<Segment>(&piece)) {
    const cplx a = setup.to_frame(seg->from) - root;
    const cplx b = setup.to_frame(seg->to) - root;
    if (std::abs(a.real()) <= tol && std::abs(b.real()) <= tol) {
      return std::max(a.imag(), b.imag()) > -tol;
    }
    if ((a.real() > tol && b.real() > tol) || (a.real() < -tol && b.real() < -tol)) return false;
    const double dx = b.real() - a.real();
    const double s = std::abs(dx) <= tol ? 0.0 : std::clamp(-a.real() / dx, 0.0, 1.0);
    const double h = a.imag() + s * (b.imag() - a.imag());
    return h > -tol;
  }
  const auto& arc = std::get<Arc>(piece);
  const cplx c = setup.to_frame(arc.center) - root;
  const double dx = -c.real();
  if (std::abs(dx) > arc.radius + tol) return false;
  const double dy = std::sqrt(std::max(0.0, arc.radius * arc.radius - dx * dx));
  for (double sign : {-1.0, 1.0}) {
    const double y = c.imag() + sign * dy;
    if (y <= -tol) continue;
    // Angle of the hit in the t-plane.
    const double theta = std::atan2(sign * dy, dx) - setup.frame_angle();
    if (detail::angle_on_arc(arc, theta)) return true;
  }
  return false;
}

/// Piecewise path made of segments and circular arcs. A path without pieces
/// is the constant path at its start point.
class ContourPath {
 public:
  ContourPath() = default;
  explicit ContourPath(cplx start) : start_(start) {}

  cplx start() const { return start_; }
  cplx end() const { return pieces_.empty() ? start_ : piece_end(pieces_.back()); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_constant() const { return pieces_.empty(); }

  /// Appends a segment from the current end. Zero-length segments are skipped.
  ContourPath& line_to(cplx to) {
    const cplx from = end();
    if (from != to) pieces_.push_back(Segment{from, to});
    return *this;
  }

  /// Appends an arc; its start must coincide with the current end.
  ContourPath& arc(cplx center, double radius, double theta_from, double theta_to) {
    Arc a{center, radius, theta_from, theta_to};
    const cplx s = piece_start(a);
    if (std::abs(s - end()) > 1e-12 * std::max(1.0, std::abs(s))) {
      throw Error(ErrorCode::InvalidArgument, "arc does not start at the path end");
    }
    if (theta_from != theta_to) pieces_.push_back(a);
    return *this;
  }

  ContourPath& append(const Piece& piece) {
    const cplx s = piece_start(piece);
    if (std::abs(s - end()) > 1e-12 * std::max(1.0, std::abs(s))) {
      throw Error(ErrorCode::InvalidArgument, "piece does not start at the path end");
    }
    pieces_.push_back(piece);
    return *this;
  }

  /// Concatenation: this path followed by other.
  ContourPath then(const ContourPath& other) const {
    ContourPath out = *this;
    if (std::abs(other.start() - end()) > 1e-12 * std::max(1.0, std::abs(end()))) {
      throw Error(ErrorCode::InvalidArgument, "paths are not composable");
    }
    for (const Piece& p : other.pieces_) out.pieces_.push_back(p);
    return out;
  }

  ContourPath reversed() const {
    ContourPath out(end());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      out.pieces_.push_back(twistcoh::reversed(*it));
    }
    return out;
  }

  /// Path with every piece split into halves; traces the same curve.
  ContourPath refined() const {
    ContourPath out(start_);
    for (const Piece& p : pieces_) {
      if (const auto* seg = std::get_if<Segment>(&p)) {
        const cplx mid = 0.5 * (seg->from + seg->to);
        out.pieces_.push_back(Segment{seg->from, mid});
        out.pieces_.push_back(Segment{mid, seg->to});
      } else {
        const auto& a = std::get<Arc>(p);
        const double mid = 0.5 * (a.theta_from + a.theta_to);
        out.pieces_.push_back(Arc{a.center, a.radius, a.theta_from, mid});
        out.pieces_.push_back(Arc{a.center, a.radius, mid, a.theta_to});
      }
    }
    return out;
  }

  double length() const {
    double total = 0.0;
    for (const Piece& p : pieces_) total += piece_length(p);
    return total;
  }

  bool structurally_equal(const ContourPath& other, double tol) const {
    if (pieces_.size() != other.pieces_.size()) return false;
    if (std::abs(start_ - other.start_) > tol) return false;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      if (!twistcoh::structurally_equal(pieces_[k], other.pieces_[k], tol)) return false;
    }
    return true;
  }

 private:
  cplx start_{};
  std::vector<Piece> pieces_;
};

inline double distance_to_point(const ContourPath& path, cplx x) {
  if (path.is_constant()) return std::abs(path.start() - x);
  double best = std::numeric_limits<double>::infinity();
  for (const Piece& p : path.pieces()) best = std::min(best, distance_to_point(p, x));
  return best;
}

/// Smallest distance between the path and any puncture.
inline double puncture_clearance(const TwistedSetup& setup, const ContourPath& path) {
  double best = std::numeric_limits<double>::infinity();
  for (cplx x : setup.punctures()) best = std::min(best, distance_to_point(path, x));
  return best;
}

/// True if the path stays inside the region: no foreign cut is met and no
/// puncture is touched.
inline bool path_in_region(const TwistedSetup& setup, Region region, const ContourPath& path) {
  if (!in_region(setup, region, path.start())) return false;
  for (const Piece& p : path.pieces()) {
    for (std::size_t j = 0; j < setup.size(); ++j) {
      if (region.owner && *region.owner == j) continue;
      if (crosses_cut(setup, p, j)) return false;
    }
  }
  return puncture_clearance(setup, path) > setup.point_tolerance();
}

}  // namespace twistcoh
