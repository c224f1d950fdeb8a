#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "twistcoh/error.hpp"

namespace twistcoh {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute distance to the nearest integer below which an exponent (or the
/// exponent sum) is treated as an integer.
inline constexpr double kIntegerTolerance = 1e-12;

/// Paths must keep this multiple of the minimal puncture gap away from every
/// puncture.
inline constexpr double kSafetyFactor = 1e-6;

/// Relative tolerance (scaled by TwistedSetup::scale) for point coincidence.
inline constexpr double kPointTolerance = 1e-12;

inline constexpr double kDefaultCutDirection = kPi / 2.0;

namespace detail {

inline bool near_integer(cplx z, double tol = kIntegerTolerance) {
  return std::abs(z - std::round(z.real())) <= tol;
}

inline std::string format(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << z.real() << ',' << z.imag() << ')';
  return os.str();
}

}  // namespace detail

/// Selects one of the open sets U_i (complement of all cuts except l_i) or
/// the common intersection U (complement of every cut).
struct Region {
  std::optional<std::size_t> owner;

  static Region all() { return Region{std::nullopt}; }
  static Region of(std::size_t i) { return Region{i}; }
  bool is_all() const { return !owner.has_value(); }
};

/// Punctures x_0..x_{n-1} on the projective line (x_n is infinity), the
/// exponents of the logarithmic connection form and the cut system. Immutable
/// after validation.
///
/// Geometry is handled in a rotated "frame" coordinate z = frame * t in which
/// every cut ray points straight up; lateral(t) = Re z and height(t) = Im z.
class TwistedSetup {
 public:
  std::size_t size() const { return punctures_.size(); }
  const std::vector<cplx>& punctures() const { return punctures_; }
  const std::vector<cplx>& exponents() const { return exponents_; }
  cplx puncture(std::size_t i) const { return punctures_.at(i); }
  cplx exponent(std::size_t i) const { return exponents_.at(i); }
  cplx exponent_sum() const { return exponent_sum_; }
  double cut_direction() const { return cut_direction_; }

  cplx cut_unit() const { return std::polar(1.0, cut_direction_); }
  cplx frame() const { return frame_; }
  double frame_angle() const { return std::arg(frame_); }
  cplx to_frame(cplx t) const { return t * frame_; }
  cplx from_frame(cplx z) const { return z * std::conj(frame_); }
  double lateral(cplx t) const { return to_frame(t).real(); }
  double height(cplx t) const { return to_frame(t).imag(); }

  const std::vector<cplx>& monodromy() const { return monodromy_; }

  double scale() const { return scale_; }
  double min_gap() const { return min_gap_; }
  double diameter() const { return diameter_; }
  double safety_radius() const { return kSafetyFactor * min_gap_; }
  double point_tolerance() const { return kPointTolerance * scale_; }

  /// Height (frame coordinate) of the horizontal routing line below every
  /// puncture.
  double highway_height() const { return highway_height_; }

  /// Deterministic base point p in U: on the perpendicular bisector of the two
  /// laterally extreme punctures, one diameter below the lowest puncture.
  cplx base_point() const { return base_point_; }

  /// Distance from t to the cut ray l_j.
  double distance_to_cut(cplx t, std::size_t j) const {
    const cplx z = to_frame(t - punctures_.at(j));
    return z.imag() >= 0.0 ? std::abs(z.real()) : std::abs(z);
  }

  /// Distance from x_i to the nearest other puncture or foreign cut ray.
  double clearance(std::size_t i) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < size(); ++j) {
      if (j != i) best = std::min(best, distance_to_cut(punctures_.at(i), j));
    }
    return best;
  }

  double default_loop_radius(std::size_t i) const { return 0.25 * clearance(i); }

 private:
  friend TwistedSetup validate_setup(std::span<const cplx>, std::span<const cplx>, double);

  std::vector<cplx> punctures_;
  std::vector<cplx> exponents_;
  std::vector<cplx> monodromy_;
  cplx exponent_sum_{};
  double cut_direction_ = kDefaultCutDirection;
  cplx frame_{1.0, 0.0};
  double scale_ = 1.0;
  double min_gap_ = 0.0;
  double diameter_ = 0.0;
  double highway_height_ = 0.0;
  cplx base_point_{};
};

inline TwistedSetup validate_setup(std::span<const cplx> punctures, std::span<const cplx> exponents,
                                   double cut_direction = kDefaultCutDirection) {
  const std::size_t n = punctures.size();
  if (n != exponents.size()) {
    throw Error(ErrorCode::InvalidArgument, "punctures and exponents differ in length");
  }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "at least two punctures are required");
  if (!std::isfinite(cut_direction)) {
    throw Error(ErrorCode::InvalidArgument, "cut direction must be finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(punctures[i].real()) || !std::isfinite(punctures[i].imag()) ||
        !std::isfinite(exponents[i].real()) || !std::isfinite(exponents[i].imag())) {
      throw Error(ErrorCode::InvalidArgument, "non-finite input at index " + std::to_string(i));
    }
  }

  TwistedSetup s;
  s.punctures_.assign(punctures.begin(), punctures.end());
  s.exponents_.assign(exponents.begin(), exponents.end());
  s.cut_direction_ = cut_direction;
  s.frame_ = cplx(0.0, 1.0) * std::conj(std::polar(1.0, cut_direction));

  double scale = 1.0;
  for (cplx x : s.punctures_) scale = std::max(scale, std::abs(x));
  s.scale_ = scale;

  double min_gap = std::numeric_limits<double>::infinity();
  double diameter = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = std::abs(s.punctures_[a] - s.punctures_[b]);
      if (d <= kPointTolerance * scale) {
        throw Error(ErrorCode::DuplicatePuncture,
                    "x_" + std::to_string(a) + " and x_" + std::to_string(b) + " coincide");
      }
      min_gap = std::min(min_gap, d);
      diameter = std::max(diameter, d);
    }
  }
  s.min_gap_ = min_gap;
  s.diameter_ = diameter;

  for (std::size_t i = 0; i < n; ++i) {
    if (detail::near_integer(s.exponents_[i])) {
      throw Error(ErrorCode::IntegerExponent,
                  "alpha_" + std::to_string(i) + " = " + detail::format(s.exponents_[i]) +
                      " is within 1e-12 of an integer");
    }
  }
  s.exponent_sum_ = std::accumulate(s.exponents_.begin(), s.exponents_.end(), cplx{});
  if (detail::near_integer(s.exponent_sum_) && std::round(s.exponent_sum_.real()) <= -1.0) {
    throw Error(ErrorCode::ResonantSum, "sum of exponents " + detail::format(s.exponent_sum_) +
                                            " is within 1e-12 of a negative integer");
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(s.lateral(s.punctures_[a]) - s.lateral(s.punctures_[b])) <
          s.safety_radius()) {
        throw Error(ErrorCode::VerticalAlignment,
                    "x_" + std::to_string(a) + " and x_" + std::to_string(b) +
                        " lie on a common line in the cut direction");
      }
    }
  }

  s.monodromy_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.monodromy_[i] = std::exp(cplx(0.0, kTwoPi) * s.exponents_[i]);
  }

  double lowest = std::numeric_limits<double>::infinity();
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  for (cplx x : s.punctures_) {
    lowest = std::min(lowest, s.height(x));
    left = std::min(left, s.lateral(x));
    right = std::max(right, s.lateral(x));
  }
  s.highway_height_ = lowest - diameter;
  s.base_point_ = s.from_frame(cplx(0.5 * (left + right), s.highway_height_));
  return s;
}

inline TwistedSetup validate_setup(const std::vector<cplx>& punctures,
                                   const std::vector<cplx>& exponents,
                                   double cut_direction = kDefaultCutDirection) {
  return validate_setup(std::span<const cplx>(punctures), std::span<const cplx>(exponents),
                        cut_direction);
}

inline void check_index(const TwistedSetup& setup, std::size_t i) {
  if (i >= setup.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(i) + " with n = " + std::to_string(setup.size()));
  }
}

/// c_i = exp(2 pi i alpha_i), the factor picked up by the weight on one
/// counterclockwise turn around x_i.
inline cplx monodromy_coefficient(const TwistedSetup& setup, std::size_t i) {
  check_index(setup, i);
  return setup.monodromy()[i];
}

inline bool is_puncture(const TwistedSetup& setup, cplx t) {
  for (cplx x : setup.punctures()) {
    if (std::abs(t - x) <= setup.point_tolerance()) return true;
  }
  return false;
}

inline bool on_cut(const TwistedSetup& setup, cplx t, std::size_t j) {
  const cplx z = setup.to_frame(t - setup.puncture(j));
  const double tol = setup.point_tolerance();
  return std::abs(z.real()) <= tol && z.imag() > -tol;
}

inline bool in_region(const TwistedSetup& setup, Region region, cplx t) {
  if (region.owner) check_index(setup, *region.owner);
  if (is_puncture(setup, t)) return false;
  for (std::size_t j = 0; j < setup.size(); ++j) {
    if (region.owner && *region.owner == j) continue;
    if (on_cut(setup, t, j)) return false;
  }
  return true;
}

/// Permutation sorting the punctures by increasing real part; names the
/// chamber V_I containing the configuration.
inline std::vector<std::size_t> real_order(const TwistedSetup& setup) {
  std::vector<std::size_t> order(setup.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return setup.puncture(a).real() < setup.puncture(b).real();
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double gap = setup.puncture(order[k]).real() - setup.puncture(order[k - 1]).real();
    if (gap <= kIntegerTolerance) {
      throw Error(ErrorCode::TiedRealParts, "Re x_" + std::to_string(order[k - 1]) + " = Re x_" +
                                                std::to_string(order[k]));
    }
  }
  return order;
}

/// Ordering of punctures across the cut direction. Coincides with real_order
/// for upward cuts.
inline std::vector<std::size_t> lateral_order(const TwistedSetup& setup) {
  std::vector<std::size_t> order(setup.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return setup.lateral(setup.puncture(a)) < setup.lateral(setup.puncture(b));
  });
  return order;
}

/// Same setup with every puncture shifted by the given displacements.
inline TwistedSetup displaced(const TwistedSetup& setup, std::span<const cplx> shift) {
  if (shift.size() != setup.size()) {
    throw Error(ErrorCode::InvalidArgument, "displacement has wrong length");
  }
  std::vector<cplx> x = setup.punctures();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += shift[i];
  return validate_setup(x, setup.exponents(), setup.cut_direction());
}

}  // namespace twistcoh
