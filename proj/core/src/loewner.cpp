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

#include "slerev/loewner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace slerev {

LoewnerChain::LoewnerChain(std::vector<LoewnerStep> steps) {
  steps_.reserve(steps.size());
  start_times_.reserve(steps.size() + 1);
  for (const auto& step : steps) {
    append(step.dt, step.w);
  }
}

LoewnerChain LoewnerChain::constant(double w, double capacity, std::size_t n_steps) {
  LoewnerChain chain;
  if (n_steps == 0) {
    return chain;
  }
  const double dt = capacity / static_cast<double>(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    chain.append(dt, w);
  }
  return chain;
}

void LoewnerChain::append(double dt, double w) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(w)) {
    throw std::invalid_argument("Loewner steps need a finite positive capacity increment and finite driving");
  }
  steps_.push_back({dt, w});
  start_times_.push_back(start_times_.back() + dt);
}

LoewnerChain LoewnerChain::concatenated(const LoewnerChain& next) const {
  LoewnerChain out = *this;
  for (const auto& step : next.steps_) {
    out.append(step.dt, step.w);
  }
  return out;
}

LoewnerChain LoewnerChain::dilated(double a) const { return affine_image(a, 0.0); }

LoewnerChain LoewnerChain::affine_image(double scale, double shift) const {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("affine image needs a positive scale");
  }
  LoewnerChain out;
  for (const auto& step : steps_) {
    out.append(step.dt * scale * scale, scale * step.w + shift);
  }
  return out;
}

LoewnerChain LoewnerChain::slice(std::size_t first, std::size_t last) const {
  LoewnerChain out;
  last = std::min(last, steps_.size());
  for (std::size_t k = first; k < last; ++k) {
    out.append(steps_[k].dt, steps_[k].w);
  }
  return out;
}

BoundaryPoint boundary_point(double x, double base) {
  if (x == base) {
    throw std::invalid_argument("a boundary point at the base needs an explicit side");
  }
  return {x, x > base ? Side::kRight : Side::kLeft};
}

Complex upper_sqrt(Complex z) noexcept {
  const double a = z.real();
  const double b = z.imag();
  const double r = std::sqrt(a * a + b * b);
  if (r == 0.0) {
    return {0.0, 0.0};
  }
  const double t = std::sqrt(0.5 * (r + std::abs(a)));
  const double s = std::abs(b) / (2.0 * t);
  if (a >= 0.0) {
    // Principal root is (t, b / 2t); flip it into the upper half-plane when b < 0.
    return std::signbit(b) ? Complex{-t, s} : Complex{t, s};
  }
  return std::signbit(b) ? Complex{-s, t} : Complex{s, t};
}

namespace {

constexpr double kSlitSlack = 1.0 - 1e-9;

// u = z - w lies on the open vertical slit grown during a step of length dt.
bool on_slit(Complex u, double dt) noexcept {
  return u.real() == 0.0 && u.imag() * u.imag() < 4.0 * dt * kSlitSlack;
}

void check_time(const LoewnerChain& chain, double t) {
  if (t < 0.0 || t > chain.total_capacity() * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream out;
    out << "capacity time " << t << " outside [0, " << chain.total_capacity() << "]";
    throw std::out_of_range(out.str());
  }
}

// Calls fn(k, dt) for every step (or partial step) needed to reach time t.
template <class Fn>
void for_each_step_until(const LoewnerChain& chain, double t, Fn&& fn) {
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const double start = chain.start_time(k);
    if (start >= t) {
      return;
    }
    const double dt = std::min(chain[k].dt, t - start);
    if (!fn(k, dt)) {
      return;
    }
  }
}

struct BoundaryTrack {
  double value;
  double derivative;
  std::optional<double> swallowed_at;
};

BoundaryTrack track_boundary_point(const LoewnerChain& chain, BoundaryPoint x, double t, bool stop_at_swallow) {
  BoundaryTrack track{x.x, 1.0, std::nullopt};
  const double sign = side_sign(x.side);
  for_each_step_until(chain, t, [&](std::size_t k, double dt) {
    const double w = chain[k].w;
    double gap = track.value - w;
    if (sign * gap <= 0.0) {
      gap = 0.0;
    }
    if (!track.swallowed_at && gap == 0.0) {
      track.swallowed_at = chain.start_time(k);
      if (stop_at_swallow) {
        return false;
      }
    }
    const double r = std::sqrt(gap * gap + 4.0 * dt);
    track.derivative *= std::abs(gap) / r;
    track.value = w + sign * r;
    return true;
  });
  return track;
}

}  // namespace

Complex forward_map(const LoewnerChain& chain, Complex z, double t) {
  check_time(chain, t);
  if (z.imag() == 0.0) {
    if (z.real() == chain.base()) {
      if (t == 0.0) {
        return z;
      }
      throw SwallowedPointError("the base point is part of the hull", 0.0);
    }
    return forward_map_derivative(chain, boundary_point(z.real(), chain.base()), t).value;
  }
  if (z.imag() < 0.0) {
    throw std::invalid_argument("forward_map expects a point in the closed upper half-plane");
  }
  // Once an interior point lands on the real line it is followed like a boundary point on that side.
  double side = 0.0;
  for_each_step_until(chain, t, [&](std::size_t k, double dt) {
    Complex u = z - chain[k].w;
    if (side == 0.0 && u.imag() == 0.0) {
      side = u.real() < 0.0 ? -1.0 : 1.0;
    }
    const bool crossed = side != 0.0 && side * u.real() <= 0.0;
    if (crossed || on_slit(u, dt)) {
      std::ostringstream out;
      out << "point swallowed at capacity " << chain.start_time(k);
      throw SwallowedPointError(out.str(), chain.start_time(k));
    }
    if (side != 0.0) {
      z = chain[k].w + side * std::sqrt(u.real() * u.real() + 4.0 * dt);
      return true;
    }
    z = chain[k].w + upper_sqrt(u * u + 4.0 * dt);
    return true;
  });
  return z;
}

Complex forward_map(const LoewnerChain& chain, Complex z) { return forward_map(chain, z, chain.total_capacity()); }

BoundaryImage forward_map_derivative(const LoewnerChain& chain, BoundaryPoint x, double t) {
  check_time(chain, t);
  const auto track = track_boundary_point(chain, x, t, true);
  if (track.swallowed_at) {
    std::ostringstream out;
    out << "boundary point " << x.x << to_string(x.side) << " swallowed at capacity " << *track.swallowed_at;
    throw SwallowedPointError(out.str(), *track.swallowed_at);
  }
  return {track.value, track.derivative};
}

BoundaryImage forward_map_derivative(const LoewnerChain& chain, double x, double t) {
  return forward_map_derivative(chain, boundary_point(x, chain.base()), t);
}

RelativeBoundaryImage forward_map_relative(const LoewnerChain& chain, BoundaryPoint x, BoundaryPoint anchor,
                                           double t) {
  check_time(chain, t);
  const double sign = side_sign(x.side);
  if (anchor.side != x.side || sign * (x.x - anchor.x) <= 0.0 || sign * (anchor.x - chain.base()) < 0.0) {
    throw std::invalid_argument("anchor must lie between the base and the tracked point");
  }
  double value = x.x;
  double log_derivative = 0.0;
  double log_separation = std::log(std::abs(x.x - anchor.x));
  std::optional<double> swallowed_at;
  for_each_step_until(chain, t, [&](std::size_t k, double dt) {
    const double w = chain[k].w;
    const double gap = sign * (value - w);
    if (gap <= 0.0) {
      swallowed_at = chain.start_time(k);
      return false;
    }
    // Gap of the anchor, reconstructed from the separation; zero once the driving has passed it.
    double separation = std::exp(log_separation);
    if (separation >= gap) {
      separation = gap;
      log_separation = std::log(gap);
    }
    const double anchor_gap = gap - separation;
    const double r = std::sqrt(gap * gap + 4.0 * dt);
    const double r_anchor = std::sqrt(anchor_gap * anchor_gap + 4.0 * dt);
    log_separation += std::log((gap + anchor_gap) / (r + r_anchor));
    log_derivative += std::log(gap / r);
    value = w + sign * r;
    return true;
  });
  if (swallowed_at) {
    std::ostringstream out;
    out << "boundary point " << x.x << to_string(x.side) << " swallowed at capacity " << *swallowed_at;
    throw SwallowedPointError(out.str(), *swallowed_at);
  }
  return {value, log_derivative, log_separation};
}

double boundary_image(const LoewnerChain& chain, BoundaryPoint x, double t) {
  check_time(chain, t);
  return track_boundary_point(chain, x, t, false).value;
}

std::optional<double> hull_swallow_time(const LoewnerChain& chain, BoundaryPoint x, double t_max) {
  const double t = std::min(t_max, chain.total_capacity());
  return track_boundary_point(chain, x, t, true).swallowed_at;
}

TipTracer::TipTracer(const LoewnerChain& chain, double far_field_ratio) : chain_(&chain), ratio_(far_field_ratio) {
  if (!std::isfinite(ratio_)) {
    return;
  }
  const auto combine = [](const Block& a, const Block& b) {
    Block out{};
    out.capacity = a.capacity + b.capacity;
    out.wbar = (a.capacity * a.wbar + b.capacity * b.wbar) / out.capacity;
    out.spread = std::max(a.spread + std::abs(a.wbar - out.wbar), b.spread + std::abs(b.wbar - out.wbar));
    out.second_moment = a.second_moment + b.second_moment + a.capacity * (a.wbar - out.wbar) * (a.wbar - out.wbar) +
                        b.capacity * (b.wbar - out.wbar) * (b.wbar - out.wbar);
    return out;
  };
  std::vector<Block> previous;
  previous.reserve(chain.size());
  for (const auto& step : chain.steps()) {
    previous.push_back({step.dt, step.w, 0.0, 0.0});
  }
  while (previous.size() >= 2) {
    std::vector<Block> level(previous.size() / 2);
    for (std::size_t b = 0; b < level.size(); ++b) {
      level[b] = combine(previous[2 * b], previous[2 * b + 1]);
    }
    levels_.push_back(level);
    previous = std::move(level);
  }
}

Complex TipTracer::tip(std::size_t k) const {
  const auto& chain = *chain_;
  last_map_count_ = 0;
  if (k == 0) {
    return {chain.base(), 0.0};
  }
  std::size_t pos = k - 1;
  Complex z{chain[pos].w, 2.0 * std::sqrt(chain[pos].dt)};
  last_map_count_ = 1;
  while (pos > 0) {
    bool applied = false;
    if (!levels_.empty()) {
      const auto aligned = static_cast<std::size_t>(std::countr_zero(pos));
      for (std::size_t j = std::min(aligned, levels_.size()); j >= 1; --j) {
        const std::size_t width = std::size_t{1} << j;
        if (width > pos) {
          continue;
        }
        const Block& block = levels_[j - 1][pos / width - 1];
        const Complex u = z - block.wbar;
        const double reach = ratio_ * (2.0 * std::sqrt(block.capacity) + block.spread);
        if (std::norm(u) >= reach * reach) {
          // Single slit at the mean driving, corrected to first order for the driving spread.
          const Complex v = upper_sqrt(u * u - 4.0 * block.capacity);
          z = block.wbar + v - 2.0 * block.second_moment / (v * v * v);
          pos -= width;
          applied = true;
          break;
        }
      }
    }
    if (!applied) {
      --pos;
      const Complex u = z - chain[pos].w;
      z = chain[pos].w + upper_sqrt(u * u - 4.0 * chain[pos].dt);
    }
    ++last_map_count_;
  }
  return z;
}

namespace {

void refine(const LoewnerChain& chain, const TipTracer& tracer, const TraceOptions& options, std::size_t ka,
            Complex pa, std::size_t kb, Complex pb, std::vector<std::pair<std::size_t, Complex>>& out) {
  if (kb - ka <= 1 || out.size() >= options.max_points) {
    return;
  }
  const double scale = std::min(std::abs(pa), std::abs(pb));
  if (std::abs(pa - pb) <= options.relative_resolution * scale) {
    return;
  }
  const double t_mid = 0.5 * (chain.start_time(ka) + chain.start_time(kb));
  // Capacity midpoint, kept strictly inside (ka, kb).
  std::size_t lo = ka + 1;
  std::size_t hi = kb - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (chain.start_time(mid) < t_mid) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const std::size_t km = lo;
  const Complex pm = tracer.tip(km);
  refine(chain, tracer, options, ka, pa, km, pm, out);
  out.emplace_back(km, pm);
  refine(chain, tracer, options, km, pm, kb, pb, out);
}

}  // namespace

CurveTrace trace_curve(const LoewnerChain& chain, const TraceOptions& options) {
  CurveTrace trace;
  const TipTracer tracer(chain, options.mode == TraceOptions::Mode::kEveryStep
                                    ? std::numeric_limits<double>::infinity()
                                    : options.far_field_ratio);
  if (chain.empty()) {
    trace.points.emplace_back(0.0, 0.0);
    trace.times.push_back(0.0);
    return trace;
  }
  if (options.mode == TraceOptions::Mode::kEveryStep) {
    trace.points.reserve(chain.size() + 1);
    for (std::size_t k = 0; k <= chain.size(); ++k) {
      trace.points.push_back(tracer.tip(k));
      trace.times.push_back(chain.start_time(k));
    }
    return trace;
  }

  // Coarse geometric grid in capacity, then bisection where the curve moves too far.
  std::vector<std::size_t> grid{0};
  const double growth = std::max(options.grid_growth, 1.0 + 1e-6);
  double target = chain.start_time(1);
  for (std::size_t k = 1; k <= chain.size(); ++k) {
    if (chain.start_time(k) >= target || k == chain.size()) {
      grid.push_back(k);
      target = std::max(target, chain.start_time(k)) * growth;
    }
  }
  std::vector<std::pair<std::size_t, Complex>> out;
  out.reserve(4 * grid.size());
  Complex previous = tracer.tip(0);
  out.emplace_back(0, previous);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const Complex current = tracer.tip(grid[g]);
    refine(chain, tracer, options, grid[g - 1], previous, grid[g], current, out);
    out.emplace_back(grid[g], current);
    previous = current;
  }
  trace.points.reserve(out.size());
  trace.times.reserve(out.size());
  for (const auto& [k, p] : out) {
    trace.points.push_back(p);
    trace.times.push_back(chain.start_time(k));
  }
  return trace;
}

}  // namespace slerev
