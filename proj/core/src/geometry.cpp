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

#include "slerev/geometry.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace slerev {

CurveTrace apply_j(const CurveTrace& trace) {
  CurveTrace out;
  out.points.reserve(trace.size());
  out.times.reserve(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Complex z = trace.points[k];
    if (z == Complex{0.0, 0.0}) {
      continue;
    }
    out.points.push_back(-1.0 / z);
    out.times.push_back(trace.times[k]);
  }
  return out;
}

ReversedCurve reverse_curve(const CurveTrace& trace) {
  ReversedCurve out;
  out.source_points = trace.size();
  out.points.reserve(trace.size());
  for (auto it = trace.points.rbegin(); it != trace.points.rend(); ++it) {
    if (*it != Complex{0.0, 0.0}) {
      out.points.push_back(-1.0 / *it);
    }
  }
  return out;
}

double weight_factor_at(const LoewnerChain& chain, double x, Side side, double t) {
  const auto image = forward_map_relative(chain, BoundaryPoint{x, side}, BoundaryPoint{chain.base(), side}, t);
  return std::exp(std::log(std::abs(x)) + image.log_derivative - image.log_separation);
}

namespace {

// Outermost boundary point on `side` swallowed by capacity t, found by bisection.
double swallowed_extent(const LoewnerChain& chain, double x, Side side, double t) {
  const double base = chain.base();
  double lo = 0.0;
  double hi = std::abs(x - base);
  for (int iter = 0; iter < 60 && hi - lo > 1e-12 * std::abs(x - base); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hull_swallow_time(chain, {base + side_sign(side) * mid, side}, t)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return base + side_sign(side) * lo;
}

}  // namespace

ComponentRecord component_weight_factor(const LoewnerChain& chain, const SleParams& params, std::size_t index,
                                        Side side, const TruncationPolicy& policy) {
  const auto& points = params.side(side);
  if (index == 0 || index >= points.count()) {
    throw std::invalid_argument("weight factors are defined for non-degenerate force points only");
  }
  const double capacity = chain.total_capacity();
  double T = policy.T;
  if (!(T >= 0.0) || T > capacity * (1.0 + 1e-12)) {
    std::ostringstream out;
    out << "truncation capacity " << T << " outside [0, " << capacity << "]";
    throw std::invalid_argument(out.str());
  }
  T = std::min(T, capacity);

  ComponentRecord record;
  record.side = side;
  record.index = index;
  record.x = points.location(index);
  record.sigma = ExtendedPoint::zero(side);
  record.xi = ExtendedPoint::infinity(side);

  double factor = weight_factor_at(chain, record.x, side, T);
  double error = 0.0;
  if (T > 0.0) {
    const auto fits = [&](double t) { return t <= capacity * (1.0 + 1e-12); };
    if (fits(2.0 * T)) {
      for (int d = 0; d < policy.max_doublings && fits(2.0 * T); ++d) {
        const double doubled = weight_factor_at(chain, record.x, side, std::min(2.0 * T, capacity));
        error = std::abs(doubled - factor) / doubled;
        factor = doubled;
        T = std::min(2.0 * T, capacity);
        if (error < policy.relative_tolerance) {
          break;
        }
      }
    } else {
      const double halved = weight_factor_at(chain, record.x, side, 0.5 * T);
      error = std::abs(factor - halved) / factor;
    }
  }
  record.factor = factor;
  record.truncation_error = error;
  record.capacity = T;
  if (policy.locate_sigma && T > 0.0) {
    record.sigma = ExtendedPoint::finite(swallowed_extent(chain, record.x, side, T));
  }
  return record;
}

NormalizedMap normalized_map(const LoewnerChain& chain, double x, double t) {
  return normalized_map(chain, x, t, {chain.base(), x > chain.base() ? Side::kRight : Side::kLeft});
}

NormalizedMap normalized_map(const LoewnerChain& chain, double x, double t, BoundaryPoint sigma) {
  auto shared = std::make_shared<const LoewnerChain>(chain);
  const BoundaryPoint marked = boundary_point(x, chain.base());
  const double s = side_sign(marked.side);
  const double a = boundary_image(*shared, sigma, t);
  const double b = forward_map_derivative(*shared, marked, t).value;
  const double scale = s / (b - a);
  NormalizedMap map;
  map.marked = x;
  map.value = [shared, t, a, scale](Complex z) { return scale * (forward_map(*shared, z, t) - a); };
  map.derivative = [shared, t, scale](double y) {
    return scale * forward_map_derivative(*shared, boundary_point(y, shared->base()), t).derivative;
  };
  return map;
}

double chain_rule_check(const NormalizedMap& outer, const NormalizedMap& inner, double x) {
  const double y = inner.value(Complex{x, 0.0}).real();
  if (std::abs(outer.marked - y) > 1e-8 * std::max(1.0, std::abs(y))) {
    std::ostringstream out;
    out << "outer map is marked at " << outer.marked << " but the inner map sends " << x << " to " << y;
    throw std::invalid_argument(out.str());
  }
  const double h = 1e-20 * std::max(1.0, std::abs(x));
  const Complex shifted = outer.value(inner.value(Complex{x, h}));
  const double composed = std::abs(x * shifted.imag() / h);
  const double product = std::abs(y * outer.derivative(y)) * std::abs(x * inner.derivative(x) / y);
  return std::abs(composed - product) / composed;
}

}  // namespace slerev
