// Copyright 2026 The slerev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLEREV_PARAMS_HPP
#define SLEREV_PARAMS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slerev/common.hpp"

/**
 * \file
 * \brief Force-point parameter algebra: validation, reversal transform and merging.
 *
 * Force points on each side are indexed outward from the origin. Index 0 is the
 * degenerate marker 0^- (left) or 0^+ (right), which is always present and carries
 * its own weight. Indices 1.. are the non-degenerate points, stored with their
 * actual (signed) locations.
 */

namespace slerev {

struct ForcePoint {
  double location;
  double weight;

  friend bool operator==(const ForcePoint&, const ForcePoint&) = default;
};

/// Force points on one side of the origin.
struct SideParams {
  /// Weight of the degenerate point 0^- or 0^+.
  double degenerate_weight = 0.0;
  /// Non-degenerate points ordered by increasing distance to the origin.
  std::vector<ForcePoint> points;

  /// Number of force points including the degenerate marker.
  [[nodiscard]] std::size_t count() const noexcept { return points.size() + 1; }
  /// Weight of point `index` (0 is the degenerate marker).
  [[nodiscard]] double weight(std::size_t index) const;
  /// Location of point `index`; 0.0 for the degenerate marker.
  [[nodiscard]] double location(std::size_t index) const;
  /// Sum of the weights of points 0..j.
  [[nodiscard]] double partial_sum(std::size_t j) const;
  /// Sum of all weights on this side.
  [[nodiscard]] double total_weight() const;

  friend bool operator==(const SideParams&, const SideParams&) = default;
};

struct SleParams {
  double kappa = 2.0;
  SideParams left;
  SideParams right;

  [[nodiscard]] const SideParams& side(Side s) const noexcept { return s == Side::kLeft ? left : right; }
  [[nodiscard]] SideParams& side(Side s) noexcept { return s == Side::kLeft ? left : right; }
  [[nodiscard]] bool has_nondegenerate_points() const noexcept {
    return !left.points.empty() || !right.points.empty();
  }

  friend bool operator==(const SleParams&, const SleParams&) = default;
};

/// Lower bound every partial weight sum must strictly exceed: max(-2, kappa/2 - 4).
[[nodiscard]] double continuation_bound(double kappa) noexcept;

/// Partial sums at or above kappa/2 - 2 keep the curve off the corresponding boundary interval.
[[nodiscard]] double hitting_bound(double kappa) noexcept;

enum class Validity { kValid, kMalformed, kThresholdViolation };

struct ValidityReport {
  Validity status = Validity::kValid;
  /// Offending side and index for threshold violations (and for malformed points when known).
  std::optional<Side> side;
  std::optional<std::size_t> index;
  double partial_sum = 0.0;
  double bound = 0.0;
  std::string message;

  [[nodiscard]] bool ok() const noexcept { return status == Validity::kValid; }
};

/// Checks well-formedness, then the partial-sum bound on each side (left first).
[[nodiscard]] ValidityReport validate_params(const SleParams& params);

/// Well-formedness only: kappa range, finite values, strict ordering of locations.
[[nodiscard]] ValidityReport check_well_formed(const SleParams& params);

/// Parameters of a weighted law: base parameters plus one power per non-degenerate point.
struct TiltedParams {
  SleParams base;
  std::vector<double> left_alphas;
  std::vector<double> right_alphas;

  [[nodiscard]] const std::vector<double>& alphas(Side s) const noexcept {
    return s == Side::kLeft ? left_alphas : right_alphas;
  }
  [[nodiscard]] std::vector<double>& alphas(Side s) noexcept { return s == Side::kLeft ? left_alphas : right_alphas; }
  [[nodiscard]] bool unweighted() const noexcept;
};

/// Power attached to a reversed weight: rho (kappa - 4) / (2 kappa).
[[nodiscard]] double tilt_exponent(double rho_hat, double kappa) noexcept;

/// Parameters of the time-reversed, J-mapped curve together with the weighting powers.
/// Throws InvalidParamsError when `params` fails validation.
[[nodiscard]] TiltedParams reverse_params(const SleParams& params);

/// A boundary location in the extended real line, with signed zeros kept symbolic.
struct ExtendedPoint {
  enum class Kind { kFinite, kZeroMinus, kZeroPlus, kMinusInfinity, kPlusInfinity };
  Kind kind = Kind::kFinite;
  double value = 0.0;

  static ExtendedPoint finite(double x) noexcept { return {Kind::kFinite, x}; }
  static ExtendedPoint zero(Side s) noexcept { return {s == Side::kLeft ? Kind::kZeroMinus : Kind::kZeroPlus, 0.0}; }
  static ExtendedPoint infinity(Side s) noexcept {
    return {s == Side::kLeft ? Kind::kMinusInfinity : Kind::kPlusInfinity, 0.0};
  }
  friend bool operator==(const ExtendedPoint&, const ExtendedPoint&) = default;
};

/// z -> -1/z on the extended boundary, with -1/(+inf) = 0^- and -1/(-inf) = 0^+.
[[nodiscard]] ExtendedPoint j_map(ExtendedPoint p) noexcept;

/// New locations of every force point, indexed like SideParams (0 = former degenerate marker).
/// Left locations are <= 0, right locations >= 0; a location of exactly 0 means "at the new 0^-/0^+".
struct CollisionPositions {
  std::vector<double> left;
  std::vector<double> right;
};

/// Merges coincident force points (within `tolerance`) by summing their weights.
/// Points relocated to 0 merge into the degenerate marker. Throws InvalidParamsError when the
/// positions are the wrong size, on the wrong side, or out of order.
[[nodiscard]] SleParams merge_collided_points(const SleParams& params, const CollisionPositions& positions,
                                              double tolerance = 0.0);

}  // namespace slerev

#endif  // SLEREV_PARAMS_HPP
