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

#ifndef SLEREV_LOEWNER_HPP
#define SLEREV_LOEWNER_HPP

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "slerev/common.hpp"

/**
 * \file
 * \brief Discrete chordal Loewner chains built from elementary vertical-slit maps.
 *
 * Step k holds the driving value fixed at w_k for a capacity increment dt_k, so the
 * mapping-out function advances by the exact slit map
 *
 *     z -> w_k + sqrt((z - w_k)^2 + 4 dt_k),
 *
 * with the branch of the square root that keeps the upper half-plane in itself.
 */

namespace slerev {

using Complex = std::complex<double>;

struct LoewnerStep {
  double dt;
  double w;
};

class LoewnerChain {
 public:
  LoewnerChain() = default;
  /// Throws std::invalid_argument if any increment is not strictly positive and finite.
  explicit LoewnerChain(std::vector<LoewnerStep> steps);

  /// `n_steps` equal steps with constant driving `w` adding up to `capacity`.
  [[nodiscard]] static LoewnerChain constant(double w, double capacity, std::size_t n_steps);

  void append(double dt, double w);

  [[nodiscard]] const std::vector<LoewnerStep>& steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t size() const noexcept { return steps_.size(); }
  [[nodiscard]] bool empty() const noexcept { return steps_.empty(); }
  [[nodiscard]] const LoewnerStep& operator[](std::size_t k) const noexcept { return steps_[k]; }

  /// Capacity time at the start of step k; k == size() gives the total capacity.
  [[nodiscard]] double start_time(std::size_t k) const noexcept { return start_times_[k]; }
  [[nodiscard]] double total_capacity() const noexcept { return start_times_.back(); }
  /// Driving value at the start of the chain (the curve's base point).
  [[nodiscard]] double base() const noexcept { return steps_.empty() ? 0.0 : steps_.front().w; }

  /// This chain followed by `next`; the maps compose as g_next o g_this.
  [[nodiscard]] LoewnerChain concatenated(const LoewnerChain& next) const;
  /// Chain of the hull scaled by `a` > 0: capacities times a^2, driving times a.
  [[nodiscard]] LoewnerChain dilated(double a) const;
  /// Chain conjugated by the real affine map z -> scale z + shift (scale > 0).
  [[nodiscard]] LoewnerChain affine_image(double scale, double shift) const;
  /// Steps [first, last) as a chain of their own.
  [[nodiscard]] LoewnerChain slice(std::size_t first, std::size_t last) const;

 private:
  std::vector<LoewnerStep> steps_;
  std::vector<double> start_times_{0.0};
};

/// Collision tolerance used when detecting threshold hits: |g(x) - w| < kCollisionFactor * sqrt(dt).
/// Swallowing itself is exact: a boundary point is absorbed once its image reaches or passes w.
inline constexpr double kCollisionFactor = 2.0;

/// A real boundary point with the side it sits on relative to the chain's base.
/// Needed to disambiguate 0^- from 0^+ and to follow points merged with the driving value.
struct BoundaryPoint {
  double x;
  Side side;
};

/// Side taken from the sign of x relative to `base`; x must differ from it.
[[nodiscard]] BoundaryPoint boundary_point(double x, double base = 0.0);

/// Square root with nonnegative imaginary part (upper half-plane branch).
[[nodiscard]] Complex upper_sqrt(Complex z) noexcept;

/// g_t(z) for z in the closed upper half-plane. Real z (zero imaginary part) follow the boundary
/// branch on the side of the base they start on. Throws SwallowedPointError if z is absorbed into
/// the hull before t, std::out_of_range if t exceeds the total capacity.
[[nodiscard]] Complex forward_map(const LoewnerChain& chain, Complex z, double t);
[[nodiscard]] Complex forward_map(const LoewnerChain& chain, Complex z);

struct BoundaryImage {
  double value;
  double derivative;
};

/// g_t(x) and g_t'(x) for an unswallowed boundary point. Throws SwallowedPointError otherwise.
[[nodiscard]] BoundaryImage forward_map_derivative(const LoewnerChain& chain, BoundaryPoint x, double t);
[[nodiscard]] BoundaryImage forward_map_derivative(const LoewnerChain& chain, double x, double t);

struct RelativeBoundaryImage {
  double value;
  double log_derivative;
  /// log |g_t(x) - g_t(anchor)|.
  double log_separation;
};

/// g_t(x) with log g_t'(x) and the log distance to the image of `anchor`, a point on the same side
/// between the base and x. The distance is followed step by step rather than obtained by
/// subtraction, so it stays accurate long after the two images agree to machine precision. The
/// anchor may be absorbed (as in boundary_image); x may not: throws SwallowedPointError.
[[nodiscard]] RelativeBoundaryImage forward_map_relative(const LoewnerChain& chain, BoundaryPoint x,
                                                         BoundaryPoint anchor, double t);

/// g_t of a boundary point without the swallowing check. Absorbed points stay glued to the
/// corresponding side of the hull, so g_t(0^+) is the right image of the rightmost hull point.
[[nodiscard]] double boundary_image(const LoewnerChain& chain, BoundaryPoint x, double t);

/// First step-start time at which the image of x is at or beyond the driving value, or nullopt if it survives
/// up to `t_max` (default: the whole chain).
[[nodiscard]] std::optional<double> hull_swallow_time(const LoewnerChain& chain, BoundaryPoint x,
                                                      double t_max = std::numeric_limits<double>::infinity());

/// Ordered curve points with their capacity timestamps; points[0] is the base point.
struct CurveTrace {
  std::vector<Complex> points;
  std::vector<double> times;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  [[nodiscard]] bool empty() const noexcept { return points.empty(); }
};

struct TraceOptions {
  enum class Mode {
    /// One tip per step, each unzipped through the full step list. O(n^2).
    kEveryStep,
    /// Tips at a geometric capacity grid, bisected until consecutive points are within
    /// `relative_resolution` of their distance to the origin (or one step apart).
    kAdaptive,
  };
  Mode mode = Mode::kAdaptive;
  double relative_resolution = 0.02;
  /// Blocks of old steps are replaced by a single corrected slit map once the point being
  /// unzipped is farther than this many block radii away; infinity disables the approximation.
  double far_field_ratio = 2.5;
  /// Capacity ratio between consecutive points of the initial grid.
  double grid_growth = 1.1;
  std::size_t max_points = 1U << 20U;
};

/// Tip positions of a chain: the tip after step k is the preimage of w_k under g_{t_{k+1}}.
class TipTracer {
 public:
  explicit TipTracer(const LoewnerChain& chain,
                     double far_field_ratio = std::numeric_limits<double>::infinity());

  /// Curve point at the start time of step k (k = 0 is the base point, k = size() the final tip).
  [[nodiscard]] Complex tip(std::size_t k) const;

  /// Number of inverse maps applied by the last call to tip(); for benchmarking.
  [[nodiscard]] std::size_t last_map_count() const noexcept { return last_map_count_; }

 private:
  struct Block {
    double capacity;
    double wbar;
    double spread;
    /// sum of c_i (w_i - wbar)^2; the block's z^-3 coefficient exceeds the slit's by twice this.
    double second_moment;
  };

  const LoewnerChain* chain_;
  double ratio_;
  // levels_[j] holds aligned blocks of 2^(j+1) steps.
  std::vector<std::vector<Block>> levels_;
  mutable std::size_t last_map_count_ = 0;
};

[[nodiscard]] CurveTrace trace_curve(const LoewnerChain& chain, const TraceOptions& options = {});

}  // namespace slerev

#endif  // SLEREV_LOEWNER_HPP
