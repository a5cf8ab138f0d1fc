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

#include "slerev/sle_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace slerev {

double default_epsilon0(const SleParams& params) {
  double nearest = 1.0;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& side = params.side(s);
    if (!side.points.empty()) {
      nearest = std::min(nearest, std::abs(side.points.front().location));
    }
  }
  return 1e-4 * nearest;
}

namespace {

// Index of the innermost point whose cluster weight is <= -2, if any.
std::optional<std::size_t> threshold_index(const SideParams& side) {
  for (std::size_t j = 0; j < side.count(); ++j) {
    if (side.partial_sum(j) <= -2.0) {
      return j;
    }
  }
  return std::nullopt;
}

struct ThresholdIndices {
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;

  explicit ThresholdIndices(const SleParams& p) : left(threshold_index(p.left)), right(threshold_index(p.right)) {}
  [[nodiscard]] bool any() const noexcept { return left || right; }
};

template <class ImageFn>
bool threshold_collision(const ThresholdIndices& idx, double w, double dt, ImageFn&& image) {
  const double tolerance = kCollisionFactor * std::sqrt(dt);
  if (idx.left && image(Side::kLeft, *idx.left) > w - tolerance) {
    return true;
  }
  return idx.right && image(Side::kRight, *idx.right) < w + tolerance;
}

constexpr int kMaxFloorRedraws = 64;
// The ramp stops shrinking the step at dt_max / 64; finer scales sit well inside any observable.
constexpr double kRampFloor = 1.0 / 64;

class Sampler {
 public:
  Sampler(const SleParams& params, const SamplerConfig& config, CounterRng& rng)
      : params_(params),
        config_(config),
        rng_(rng),
        sqrt_kappa_(std::sqrt(params.kappa)),
        hitting_(hitting_bound(params.kappa)),
        dt_floor_(config.dt_max * config.dt_floor_ratio),
        thresholds_(params) {
    const double eps0 = config.epsilon0.value_or(default_epsilon0(params));
    for (const Side s : {Side::kLeft, Side::kRight}) {
      const auto& side = params.side(s);
      auto& v = images(s);
      v.resize(side.count());
      v[0] = side_sign(s) * eps0;
      for (std::size_t i = 1; i < side.count(); ++i) {
        v[i] = side.location(i);
      }
      auto& out = s == Side::kLeft ? path_.v_left : path_.v_right;
      out.resize(side.count());
    }
    path_.seed = rng.seed();
    path_.stream = rng.stream();
    const auto expected = static_cast<std::size_t>(std::min(1e7, 1.2 * config.T / config.dt_max)) + 16;
    path_.times.reserve(expected);
    path_.w.reserve(expected);
    for (auto* out : {&path_.v_left, &path_.v_right}) {
      for (auto& series : *out) {
        series.reserve(expected);
      }
    }
    record();
  }

  DrivingPath run() {
    const double T = config_.T;
    while (T - t_ > 1e-12 * T && !path_.stopped_at) {
      // Passive points count too: near-approaches of the curve to the boundary show up as W
      // closing in on them.
      double gap = std::numeric_limits<double>::infinity();
      for (const double v : v_left_) {
        gap = std::min(gap, w_ - v);
      }
      for (const double v : v_right_) {
        gap = std::min(gap, v - w_);
      }
      gap = std::max(gap, config_.delta_sing);
      double cap = config_.dt_max;
      if (t_ < config_.dt_ramp) {
        cap *= std::max(t_ / config_.dt_ramp, kRampFloor);
      }
      const double dt = std::min(std::clamp(config_.gamma * gap * gap, dt_floor_, cap), T - t_);
      advance(dt, std::sqrt(dt) * normal_(rng_));
      if (path_.steps() > config_.max_steps) {
        std::ostringstream out;
        out << "sampler exceeded " << config_.max_steps << " steps at capacity " << t_;
        throw Error(out.str());
      }
    }
    return std::move(path_);
  }

 private:
  std::vector<double>& images(Side s) { return s == Side::kLeft ? v_left_ : v_right_; }

  void record() {
    path_.times.push_back(t_);
    path_.w.push_back(w_);
    for (std::size_t i = 0; i < v_left_.size(); ++i) {
      path_.v_left[i].push_back(v_left_[i]);
    }
    for (std::size_t i = 0; i < v_right_.size(); ++i) {
      path_.v_right[i].push_back(v_right_[i]);
    }
  }

  void advance(double dt, double dB) {
    proposal_left_ = v_left_;
    proposal_right_ = v_right_;
    double w_new = w_ + sqrt_kappa_ * dB;
    for (const Side s : {Side::kLeft, Side::kRight}) {
      const double sign = side_sign(s);
      const auto& side = params_.side(s);
      auto& v = s == Side::kLeft ? proposal_left_ : proposal_right_;
      for (std::size_t i = 0; i < v.size(); ++i) {
        double gap = v[i] - w_;
        if (sign * gap < 0.0) {
          gap = 0.0;
        }
        const double moved = w_ + sign * std::sqrt(gap * gap + 4.0 * dt);
        w_new -= 0.5 * side.weight(i) * (moved - v[i]);
        v[i] = moved;
      }
    }

    bool crosses_non_hitting = false;
    bool forcing = false;
    for (const Side s : {Side::kLeft, Side::kRight}) {
      const double sign = side_sign(s);
      auto& v = s == Side::kLeft ? proposal_left_ : proposal_right_;
      std::size_t crossed = 0;
      while (crossed < v.size() && sign * (v[crossed] - w_new) <= 0.0) {
        ++crossed;
      }
      if (crossed == 0) {
        continue;
      }
      const auto& side = params_.side(s);
      const double cluster = side.partial_sum(crossed - 1);
      if (cluster >= hitting_ && cluster > -2.0) {
        crosses_non_hitting = true;
        for (std::size_t i = 0; i < crossed; ++i) {
          forcing = forcing || side.weight(i) != 0.0;
        }
      }
      for (std::size_t i = 0; i < crossed; ++i) {
        v[i] = w_new;
      }
    }

    if (crosses_non_hitting) {
      if (0.5 * dt >= dt_floor_) {
        // Split along the Brownian bridge and retry both halves from the current state.
        ++path_.bridge_splits;
        const double first = 0.5 * dB + 0.5 * std::sqrt(dt) * normal_(rng_);
        advance(0.5 * dt, first);
        if (!path_.stopped_at) {
          advance(0.5 * dt, dB - first);
        }
        return;
      }
      // Redrawing conditions W, which is only right when the crossed points push on it;
      // passive points are simply merged.
      if (forcing && floor_redraws_ < kMaxFloorRedraws) {
        ++floor_redraws_;
        ++path_.floor_redraws;
        advance(dt, std::sqrt(dt) * normal_(rng_));
        return;
      }
      ++path_.forced_absorptions;
    }
    floor_redraws_ = 0;

    v_left_.swap(proposal_left_);
    v_right_.swap(proposal_right_);
    w_ = w_new;
    t_ += dt;
    record();
    if (thresholds_.any()) {
      const std::size_t n = path_.times.size();
      const double recorded_dt = path_.times[n - 1] - path_.times[n - 2];
      if (threshold_collision(thresholds_, w_, recorded_dt, [&](Side s, std::size_t i) { return images(s)[i]; })) {
        path_.stopped_at = t_;
      }
    }
  }

  const SleParams& params_;
  const SamplerConfig& config_;
  CounterRng& rng_;
  std::normal_distribution<double> normal_;
  double sqrt_kappa_;
  double hitting_;
  double dt_floor_;
  int floor_redraws_ = 0;
  ThresholdIndices thresholds_;
  double t_ = 0.0;
  double w_ = 0.0;
  std::vector<double> v_left_;
  std::vector<double> v_right_;
  std::vector<double> proposal_left_;
  std::vector<double> proposal_right_;
  DrivingPath path_;
};

void check_config(const SamplerConfig& config) {
  const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(config.T) || !positive(config.dt_max) || !positive(config.gamma) ||
      !positive(config.dt_floor_ratio) || !positive(config.delta_sing) ||
      !std::isfinite(config.dt_ramp) || config.dt_ramp < 0.0 ||
      (config.epsilon0 && !positive(*config.epsilon0))) {
    throw InvalidParamsError("sampler configuration values must be finite and positive");
  }
}

}  // namespace

DrivingPath sample_driving(const SleParams& params, const SamplerConfig& config, CounterRng& rng) {
  const auto report = check_well_formed(params);
  if (!report.ok()) {
    throw InvalidParamsError(report.message);
  }
  check_config(config);
  Sampler sampler(params, config, rng);
  return sampler.run();
}

std::optional<double> detect_threshold(const DrivingPath& path, const SleParams& params) {
  const ThresholdIndices idx(params);
  if (!idx.any()) {
    return std::nullopt;
  }
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double dt = path.times[k] - path.times[k - 1];
    if (threshold_collision(idx, path.w[k], dt, [&](Side s, std::size_t i) { return path.v(s)[i][k]; })) {
      return path.times[k];
    }
  }
  return std::nullopt;
}

LoewnerChain path_to_chain(const DrivingPath& path) {
  LoewnerChain chain;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    chain.append(path.times[k + 1] - path.times[k], path.w[k]);
  }
  return chain;
}

CurveTrace trace_curve(const DrivingPath& path, const TraceOptions& options) {
  return trace_curve(path_to_chain(path), options);
}

SleParams mapped_out_params(const DrivingPath& path, const SleParams& params, std::size_t k, double merge_tolerance) {
  if (k >= path.times.size()) {
    throw std::out_of_range("grid index past the end of the path");
  }
  CollisionPositions positions;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const double sign = side_sign(s);
    auto& out = s == Side::kLeft ? positions.left : positions.right;
    double previous = 0.0;
    for (const auto& series : path.v(s)) {
      // Rounding can leave an absorbed image a hair on the wrong side or out of order.
      const double distance = std::max(previous, std::max(0.0, sign * (series[k] - path.w[k])));
      out.push_back(sign * distance);
      previous = distance;
    }
  }
  return merge_collided_points(params, positions, merge_tolerance);
}

}  // namespace slerev
