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

#include "slerev/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace slerev {

GridConfig default_grid(const SleParams& params) {
  GridConfig grid;
  for (const double r : {0.5, 1.0, 2.0}) {
    for (const double theta : {std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4}) {
      grid.reference_points.push_back(std::polar(r, theta));
    }
  }
  grid.reach_height = 1.0;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const double sign = side_sign(s);
    const auto& side = params.side(s);
    const auto& points = side.points;
    for (const auto& p : points) {
      grid.marked_points.emplace_back(p.location, 0.0);
    }
    // `cluster` is the index of the outermost force point between the origin and the interval.
    const auto add = [&](double lo, double hi, std::size_t cluster) {
      if (params.kappa <= 4.0 && side.partial_sum(cluster) >= hitting_bound(params.kappa)) {
        return;
      }
      grid.intervals.push_back(sign > 0 ? Interval{lo, hi} : Interval{-hi, -lo});
    };
    if (points.empty()) {
      add(0.5, 1.0, 0);
      add(1.0, 2.0, 0);
      continue;
    }
    add(0.5 * std::abs(points.front().location), std::abs(points.front().location), 0);
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
      add(std::abs(points[j].location), std::abs(points[j + 1].location), j + 1);
    }
    add(std::abs(points.back().location), 2.0 * std::abs(points.back().location), points.size());
  }
  if (grid.marked_points.empty()) {
    grid.marked_points = {Complex{-1.0, 0.0}, Complex{1.0, 0.0}};
  }
  return grid;
}

bool ObservableVector::reached() const noexcept { return std::isfinite(first_reach_re); }

namespace {

// Signed angle swept by the direction from z while moving from p to q along a segment.
double swept(Complex p, Complex q, Complex z) { return std::arg((q - z) / (p - z)); }

}  // namespace

bool left_passage(std::span<const Complex> points, Complex z) {
  if (points.empty()) {
    throw std::invalid_argument("left passage of an empty curve");
  }
  double total = 0.0;
  if (points.front() != Complex{0.0, 0.0}) {
    total += swept(Complex{0.0, 0.0}, points.front(), z);
  }
  for (std::size_t k = 1; k < points.size(); ++k) {
    total += swept(points[k - 1], points[k], z);
  }
  const Complex last = points.back();
  // A ray seen from z ends at the ray's own direction; it sweeps less than pi.
  const Complex direction = last == Complex{0.0, 0.0} ? Complex{0.0, 1.0} : last / std::abs(last);
  total += std::arg(direction / (last - z));
  return total < 0.0;
}

double first_reach_re(std::span<const Complex> points, double y) {
  if (points.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  if (points.front().imag() >= y) {
    return points.front().real();
  }
  for (std::size_t k = 1; k < points.size(); ++k) {
    const Complex p = points[k - 1];
    const Complex q = points[k];
    if (q.imag() >= y) {
      const double s = (y - p.imag()) / (q.imag() - p.imag());
      return p.real() + s * (q.real() - p.real());
    }
  }
  return std::numeric_limits<double>::infinity();
}

double min_distance(std::span<const Complex> points, Complex z) {
  if (points.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  double best = std::abs(points.front() - z);
  for (std::size_t k = 1; k < points.size(); ++k) {
    const Complex p = points[k - 1];
    const Complex d = points[k] - p;
    const double len2 = std::norm(d);
    double s = len2 > 0.0 ? ((z - p) * std::conj(d)).real() / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, std::abs(p + s * d - z));
  }
  return best;
}

double windowed_distance(std::span<const Complex> points, Complex z, const GridConfig& grid) {
  const double r = std::abs(z);
  const double cap = std::max(0.0, std::min(r - grid.window_inner, grid.window_outer - r));
  return std::min(min_distance(points, z), cap);
}

namespace {

// Height of the band above an interval in which trace spacing sets the hit tolerance.
constexpr double kHitBand = 0.1;

bool in_box(Complex p, double lo, double hi) {
  return p.real() >= lo && p.real() <= hi && p.imag() <= kHitBand * (hi - lo);
}

}  // namespace

double hit_tolerance(std::span<const Complex> points, double a, double b) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double spacing = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!in_box(points[k], lo, hi)) {
      continue;
    }
    any = true;
    if (k > 0) {
      spacing = std::max(spacing, std::abs(points[k] - points[k - 1]));
    }
    if (k + 1 < points.size()) {
      spacing = std::max(spacing, std::abs(points[k + 1] - points[k]));
    }
  }
  return any ? 2.0 * spacing : 0.0;
}

bool interval_hit(std::span<const Complex> points, double a, double b) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double tolerance = hit_tolerance(points, lo, hi);
  return std::any_of(points.begin(), points.end(), [&](Complex p) {
    return p.real() > lo && p.real() < hi && p.imag() < tolerance;
  });
}

ObservableVector evaluate(std::span<const Complex> points, const GridConfig& grid) {
  if (points.empty()) {
    throw std::invalid_argument("observables of an empty curve");
  }
  ObservableVector obs;
  for (const Complex z : grid.reference_points) {
    obs.left_passage.push_back(left_passage(points, z) ? 1 : 0);
  }
  obs.first_reach_re = first_reach_re(points, grid.reach_height);
  for (const Complex z : grid.marked_points) {
    obs.min_dist.push_back(windowed_distance(points, z, grid));
  }
  for (const auto& interval : grid.intervals) {
    obs.hit_tolerance.push_back(hit_tolerance(points, interval.a, interval.b));
    obs.touched_intervals.push_back(interval_hit(points, interval.a, interval.b) ? 1 : 0);
  }
  return obs;
}

std::vector<std::string> observable_names(const GridConfig& grid) {
  std::vector<std::string> names;
  const auto fmt = [](double x) {
    std::ostringstream out;
    out << std::setprecision(4) << x;
    return out.str();
  };
  for (const Complex z : grid.reference_points) {
    names.push_back("left_passage[" + fmt(z.real()) + "," + fmt(z.imag()) + "]");
  }
  names.push_back("first_reach_re");
  for (const Complex z : grid.marked_points) {
    names.push_back("min_dist[" + fmt(z.real()) + "]");
  }
  for (const auto& interval : grid.intervals) {
    names.push_back("hit[" + fmt(interval.a) + "," + fmt(interval.b) + "]");
  }
  return names;
}

std::vector<double> to_row(const ObservableVector& obs) {
  std::vector<double> row;
  row.reserve(obs.left_passage.size() + 1 + obs.min_dist.size() + obs.touched_intervals.size());
  for (const auto b : obs.left_passage) {
    row.push_back(b);
  }
  row.push_back(obs.first_reach_re);
  row.insert(row.end(), obs.min_dist.begin(), obs.min_dist.end());
  for (const auto b : obs.touched_intervals) {
    row.push_back(b);
  }
  return row;
}

}  // namespace slerev
