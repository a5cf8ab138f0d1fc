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

#ifndef SLEREV_GEOMETRY_HPP
#define SLEREV_GEOMETRY_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "slerev/loewner.hpp"
#include "slerev/params.hpp"

/**
 * \file
 * \brief Curve transforms and the conformal weight factors |x psi'(x)|.
 *
 * For a force point x on side q that the hull has not swallowed, the complementary component
 * containing it is approximated by the complement of the hull at capacity T. With phi = g_T,
 * a the image of the hull side facing x and b = phi(x), the normalized map is
 *
 *     psi(z) = s (phi(z) - a) / (b - a),   s = +1 on the right, -1 on the left,
 *
 * which sends (sigma, x, infinity) to (0, s, infinity). Only this geometry is supported: the
 * component of a swallowed point is cut off by the curve and is reported as unsupported by callers.
 */

namespace slerev {

/// Pointwise z -> -1/z. Samples at the origin have no finite image and are dropped.
[[nodiscard]] CurveTrace apply_j(const CurveTrace& trace);

/// Time reversal followed by J; capacity timestamps are not meaningful after reversal.
struct ReversedCurve {
  /// Starts near 0 (image of the far end), runs toward infinity (image of the start).
  std::vector<Complex> points;
  /// Number of points of the forward trace this was built from.
  std::size_t source_points = 0;
};

[[nodiscard]] ReversedCurve reverse_curve(const CurveTrace& trace);

struct TruncationPolicy {
  /// Capacity at which the factor is first evaluated.
  double T = 0.0;
  /// Stop doubling once successive values differ by less than this (relative).
  double relative_tolerance = 1e-3;
  int max_doublings = 3;
  /// Also locate sigma (the last boundary point swallowed before x) by bisection.
  bool locate_sigma = false;
};

struct ComponentRecord {
  Side side = Side::kRight;
  std::size_t index = 0;
  /// First boundary point of the component traced by the curve; 0^-/0^+ unless the hull touched
  /// the boundary between the origin and x and locate_sigma was requested.
  ExtendedPoint sigma;
  /// Last such point; always infinity in the supported geometry.
  ExtendedPoint xi;
  double x = 0.0;
  double factor = 1.0;
  double truncation_error = 0.0;
  /// Capacity at which `factor` was finally evaluated.
  double capacity = 0.0;
};

/// Weight factor |x psi'(x)| for non-degenerate point `index` (>= 1) on side `side`.
/// The factor is evaluated at policy.T, then at doubled capacities while they fit in the chain and
/// the relative change stays above tolerance; if 2T does not fit, T/2 is used as the comparison.
/// Throws SwallowedPointError if the point is swallowed before the last capacity evaluated.
[[nodiscard]] ComponentRecord component_weight_factor(const LoewnerChain& chain, const SleParams& params,
                                                      std::size_t index, Side side,
                                                      const TruncationPolicy& policy);

/// Factor at a single capacity, without truncation control.
[[nodiscard]] double weight_factor_at(const LoewnerChain& chain, double x, Side side, double t);

/// A conformal self-map of the half-plane normalized at a marked boundary point.
struct NormalizedMap {
  /// Holomorphic near the real axis; used for complex-step differentiation.
  std::function<Complex(Complex)> value;
  /// Derivative along the real axis.
  std::function<double(double)> derivative;
  /// The marked point x, sent to +1 or -1.
  double marked = 0.0;
};

/// psi for the chain at capacity t, with sigma the boundary point on the same side as x whose
/// image becomes 0 (the hull base when it is not given).
[[nodiscard]] NormalizedMap normalized_map(const LoewnerChain& chain, double x, double t);
[[nodiscard]] NormalizedMap normalized_map(const LoewnerChain& chain, double x, double t, BoundaryPoint sigma);

/// |composed - product| / composed, where composed is |x (outer o inner)'(x)| by complex-step
/// differentiation and product is |y outer'(y)| * |x inner'(x) / y| with y = inner(x).
/// Throws std::invalid_argument unless outer.marked equals inner(x) to 1e-8 relative.
[[nodiscard]] double chain_rule_check(const NormalizedMap& outer, const NormalizedMap& inner, double x);

}  // namespace slerev

#endif  // SLEREV_GEOMETRY_HPP
