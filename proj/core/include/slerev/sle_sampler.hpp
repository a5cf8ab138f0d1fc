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

#ifndef SLEREV_SLE_SAMPLER_HPP
#define SLEREV_SLE_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "slerev/loewner.hpp"
#include "slerev/params.hpp"
#include "slerev/rng.hpp"

/**
 * \file
 * \brief Driving-function sampler for SLE_kappa(rho) with several force points.
 *
 * Each step freezes the driving value, moves every force-point image by the exact slit map and
 * integrates the force-point drift in closed form along that motion:
 *
 *     W' = W + sqrt(kappa) dB - 1/2 sum_i rho_i (V_i' - V_i).
 *
 * This is the frozen-driving integral of rho_i / (W - V_i) dt, so the drift stays bounded by
 * |rho_i| sqrt(dt) even when a force point sits next to W.
 */

namespace slerev {

struct SamplerConfig {
  /// Target capacity.
  double T = 25.0;
  double dt_max = 1e-3;
  /// Step rule: dt = clamp(gamma * gap^2, dt_max * dt_floor_ratio, cap), gap taken over all
  /// force points (degenerate and zero-weight ones included), cap = dt_max * min(1, max(t / dt_ramp, 1/64)).
  double gamma = 0.1;
  /// Capacity below which the step cap shrinks in proportion to t, so the curve is resolved
  /// relative to its own size near the base. Zero disables the ramp.
  double dt_ramp = 0.25;
  double dt_floor_ratio = 1e-6;
  /// Offset of the degenerate points 0^-/0^+; unset means default_epsilon0(params).
  std::optional<double> epsilon0;
  /// Smallest gap used in the step rule.
  double delta_sing = 1e-9;
  std::size_t max_steps = 50'000'000;
};

/// 1e-4 * min(1, distance from the origin to the nearest non-degenerate force point).
[[nodiscard]] double default_epsilon0(const SleParams& params);

/// Sampled driving function and force-point images on the step grid.
struct DrivingPath {
  /// times[k] is the start of step k; times.back() is the final capacity.
  std::vector<double> times;
  std::vector<double> w;
  /// Force-point images indexed like SideParams (0 is the degenerate point), then by grid index.
  std::vector<std::vector<double>> v_left;
  std::vector<std::vector<double>> v_right;
  /// Capacity at which a cluster of total weight <= -2 collided with W.
  std::optional<double> stopped_at;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  /// Steps whose proposal jumped over a non-hitting cluster and had to be split.
  std::size_t bridge_splits = 0;
  /// Increments redrawn at the smallest step because they jumped over a non-hitting cluster
  /// containing a weighted point.
  std::size_t floor_redraws = 0;
  /// Crossings of non-hitting clusters accepted at the smallest step: passive clusters, or
  /// weighted ones once the redraw budget ran out.
  std::size_t forced_absorptions = 0;

  [[nodiscard]] std::size_t steps() const noexcept { return times.empty() ? 0 : times.size() - 1; }
  [[nodiscard]] const std::vector<std::vector<double>>& v(Side s) const noexcept {
    return s == Side::kLeft ? v_left : v_right;
  }
};

/// Samples a path up to min(T, continuation threshold). Only well-formedness is required of
/// `params`; threshold clusters stop the path and are recorded in `stopped_at`.
/// Throws InvalidParamsError for malformed parameters or a bad configuration.
[[nodiscard]] DrivingPath sample_driving(const SleParams& params, const SamplerConfig& config, CounterRng& rng);

/// First grid time at which a force-point cluster of total weight <= -2 lies within the collision
/// tolerance of W, or nullopt.
[[nodiscard]] std::optional<double> detect_threshold(const DrivingPath& path, const SleParams& params);

/// The (dt, W) steps of the path.
[[nodiscard]] LoewnerChain path_to_chain(const DrivingPath& path);

[[nodiscard]] CurveTrace trace_curve(const DrivingPath& path, const TraceOptions& options = {});

/// Force-point configuration seen from time times[k] after mapping out the hull and recentering at
/// W: locations V - W, with points closer than `merge_tolerance` to W folded into the degenerate
/// marker and coincident points merged.
[[nodiscard]] SleParams mapped_out_params(const DrivingPath& path, const SleParams& params, std::size_t k,
                                          double merge_tolerance);

}  // namespace slerev

#endif  // SLEREV_SLE_SAMPLER_HPP
