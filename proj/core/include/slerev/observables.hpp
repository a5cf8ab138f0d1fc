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

#ifndef SLEREV_OBSERVABLES_HPP
#define SLEREV_OBSERVABLES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slerev/loewner.hpp"
#include "slerev/params.hpp"

/// \file
/// \brief Reparametrization-invariant functionals of a curve given as a polyline from near 0 toward infinity.

namespace slerev {

struct Interval {
  double a;
  double b;
};

struct GridConfig {
  /// Points tested for left passage.
  std::vector<Complex> reference_points;
  /// Height y_R for the first-reach observable.
  double reach_height = 1.0;
  /// Points whose distance to the curve is recorded.
  std::vector<Complex> marked_points;
  /// Annulus inner < |z| < outer where a curve traced for finite capacity (or its reversal) is
  /// trusted. Distances are capped at the distance from the marked point to the annulus boundary,
  /// so they ignore whatever the curve does near 0 or near infinity.
  double window_inner = 0.25;
  double window_outer = 4.0;
  /// Real intervals tested for hitting; each lies on one side of the origin.
  std::vector<Interval> intervals;
};

/// Reference points r e^{i theta} for r in {1/2, 1, 2}, theta in {pi/4, pi/2, 3pi/4}; reach
/// height 1; marked points at the non-degenerate force points of `params` (or at -1 and 1 if
/// there are none); intervals between consecutive force points on each side plus one on either
/// end, (|x_1|/2, |x_1|) and (|x_m|, 2|x_m|), or (1/2, 1) and (1, 2) on a side without points.
/// For kappa <= 4 an interval is kept only if the curve can touch it, i.e. the weights between it
/// and the origin sum to less than kappa/2 - 2; otherwise its hit indicator is zero in law and any
/// empirical hit is a discretization artifact.
[[nodiscard]] GridConfig default_grid(const SleParams& params);

struct ObservableVector {
  std::vector<std::uint8_t> left_passage;
  /// +infinity when the height is never reached.
  double first_reach_re = 0.0;
  std::vector<double> min_dist;
  std::vector<std::uint8_t> touched_intervals;
  /// Hit tolerance used for each interval.
  std::vector<double> hit_tolerance;

  [[nodiscard]] bool reached() const noexcept;
};

/// True when the curve passes to the left of z, i.e. z lies in the component to the right of it.
/// The polyline is closed by a segment from 0 to its first point and a radial ray from its last
/// point to infinity.
[[nodiscard]] bool left_passage(std::span<const Complex> points, Complex z);

/// Real part where the polyline first reaches height y, linearly interpolated; +inf if never.
[[nodiscard]] double first_reach_re(std::span<const Complex> points, double y);

/// Distance from z to the polyline.
[[nodiscard]] double min_distance(std::span<const Complex> points, Complex z);

/// Tolerance for interval hits: twice the largest spacing between consecutive points with an end
/// in the band [a, b] x [0, (b - a) / 10]; 0 if no point is in the band. Long chords higher up,
/// where a discrete chain jumps along its hull, do not count.
[[nodiscard]] double hit_tolerance(std::span<const Complex> points, double a, double b);

/// True iff a vertex above (a, b) lies below hit_tolerance(points, a, b).
[[nodiscard]] bool interval_hit(std::span<const Complex> points, double a, double b);

/// min(distance to the curve, distance from z to the boundary of the window annulus), never negative.
[[nodiscard]] double windowed_distance(std::span<const Complex> points, Complex z, const GridConfig& grid);

/// Throws std::invalid_argument for an empty polyline.
[[nodiscard]] ObservableVector evaluate(std::span<const Complex> points, const GridConfig& grid);

/// Column names in the order used by to_row.
[[nodiscard]] std::vector<std::string> observable_names(const GridConfig& grid);
/// Flattened values: booleans as 0/1.
[[nodiscard]] std::vector<double> to_row(const ObservableVector& obs);

}  // namespace slerev

#endif  // SLEREV_OBSERVABLES_HPP
