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

#include "slerev/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slerev {

double SideParams::weight(std::size_t index) const {
  if (index == 0) {
    return degenerate_weight;
  }
  return points.at(index - 1).weight;
}

double SideParams::location(std::size_t index) const {
  if (index == 0) {
    return 0.0;
  }
  return points.at(index - 1).location;
}

double SideParams::partial_sum(std::size_t j) const {
  double sum = degenerate_weight;
  for (std::size_t i = 1; i <= j; ++i) {
    sum += points.at(i - 1).weight;
  }
  return sum;
}

double SideParams::total_weight() const { return partial_sum(points.size()); }

double continuation_bound(double kappa) noexcept { return std::max(-2.0, kappa / 2.0 - 4.0); }

double hitting_bound(double kappa) noexcept { return kappa / 2.0 - 2.0; }

namespace {

ValidityReport malformed(std::string message, std::optional<Side> side = std::nullopt,
                         std::optional<std::size_t> index = std::nullopt) {
  ValidityReport report;
  report.status = Validity::kMalformed;
  report.side = side;
  report.index = index;
  report.message = std::move(message);
  return report;
}

ValidityReport check_side(const SideParams& side_params, Side side) {
  const double sign = side_sign(side);
  if (!std::isfinite(side_params.degenerate_weight)) {
    return malformed("non-finite weight", side, 0);
  }
  double previous = 0.0;
  for (std::size_t i = 0; i < side_params.points.size(); ++i) {
    const auto& point = side_params.points[i];
    if (!std::isfinite(point.location) || !std::isfinite(point.weight)) {
      return malformed("non-finite force point", side, i + 1);
    }
    const double distance = sign * point.location;
    if (distance <= previous) {
      std::ostringstream out;
      out << "force point " << to_string(side) << i + 1 << " at " << point.location
          << " breaks the strict ordering on its side";
      return malformed(out.str(), side, i + 1);
    }
    previous = distance;
  }
  return {};
}

}  // namespace

ValidityReport check_well_formed(const SleParams& params) {
  if (!std::isfinite(params.kappa) || params.kappa <= 0.0 || params.kappa > 8.0) {
    return malformed("kappa must lie in (0, 8]");
  }
  for (const Side side : {Side::kLeft, Side::kRight}) {
    auto report = check_side(params.side(side), side);
    if (!report.ok()) {
      return report;
    }
  }
  return {};
}

ValidityReport validate_params(const SleParams& params) {
  auto report = check_well_formed(params);
  if (!report.ok()) {
    return report;
  }
  const double bound = continuation_bound(params.kappa);
  for (const Side side : {Side::kLeft, Side::kRight}) {
    const auto& side_params = params.side(side);
    double sum = 0.0;
    for (std::size_t j = 0; j < side_params.count(); ++j) {
      sum += side_params.weight(j);
      if (!(sum > bound)) {
        std::ostringstream out;
        out << "partial sum of weights " << to_string(side) << "0.." << to_string(side) << j << " is " << sum
            << ", must exceed " << bound;
        report.status = Validity::kThresholdViolation;
        report.side = side;
        report.index = j;
        report.partial_sum = sum;
        report.bound = bound;
        report.message = out.str();
        return report;
      }
    }
  }
  return report;
}

bool TiltedParams::unweighted() const noexcept {
  const auto is_zero = [](double a) { return a == 0.0; };
  return std::all_of(left_alphas.begin(), left_alphas.end(), is_zero) &&
         std::all_of(right_alphas.begin(), right_alphas.end(), is_zero);
}

// Adding 0.0 turns a negative zero (kappa = 4, negative rho) into +0.
double tilt_exponent(double rho_hat, double kappa) noexcept { return rho_hat * (kappa - 4.0) / (2.0 * kappa) + 0.0; }

ExtendedPoint j_map(ExtendedPoint p) noexcept {
  using Kind = ExtendedPoint::Kind;
  switch (p.kind) {
    case Kind::kZeroMinus:
      return ExtendedPoint::infinity(Side::kRight);
    case Kind::kZeroPlus:
      return ExtendedPoint::infinity(Side::kLeft);
    case Kind::kMinusInfinity:
      return ExtendedPoint::zero(Side::kRight);
    case Kind::kPlusInfinity:
      return ExtendedPoint::zero(Side::kLeft);
    case Kind::kFinite:
      break;
  }
  return ExtendedPoint::finite(-1.0 / p.value);
}

namespace {

// Hatted side `target` is built from the opposite side of the forward parameters,
// closed off by the point at infinity carrying minus the total weight.
SideParams reversed_side(const SideParams& source, Side source_side, double kappa, std::vector<double>& alphas) {
  const std::size_t count = source.count();  // indices 0..n of the source side
  std::vector<double> weights(count + 1);
  std::vector<ExtendedPoint> locations(count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    weights[i] = source.weight(i);
    locations[i] = i == 0 ? ExtendedPoint::zero(source_side) : ExtendedPoint::finite(source.location(i));
  }
  weights[count] = -source.total_weight();
  locations[count] = ExtendedPoint::infinity(source_side);

  SideParams hatted;
  alphas.clear();
  for (std::size_t i = 0; i < count; ++i) {
    const double rho_hat = -weights[count - i];
    const ExtendedPoint x_hat = j_map(locations[count - i]);
    if (i == 0) {
      hatted.degenerate_weight = rho_hat;
    } else {
      hatted.points.push_back({x_hat.value, rho_hat});
      alphas.push_back(tilt_exponent(rho_hat, kappa));
    }
  }
  return hatted;
}

}  // namespace

TiltedParams reverse_params(const SleParams& params) {
  const auto report = validate_params(params);
  if (!report.ok()) {
    throw InvalidParamsError("cannot reverse invalid parameters: " + report.message);
  }
  TiltedParams tilted;
  tilted.base.kappa = params.kappa;
  tilted.base.left = reversed_side(params.right, Side::kRight, params.kappa, tilted.left_alphas);
  tilted.base.right = reversed_side(params.left, Side::kLeft, params.kappa, tilted.right_alphas);
  return tilted;
}

namespace {

SideParams merge_side(const SideParams& source, const std::vector<double>& positions, Side side, double tolerance) {
  if (positions.size() != source.count()) {
    throw InvalidParamsError("collision positions do not match the number of force points");
  }
  const double sign = side_sign(side);
  SideParams merged;
  double previous = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double distance = sign * positions[i];
    if (!std::isfinite(distance) || distance < 0.0) {
      throw InvalidParamsError("collision position on the wrong side of the origin");
    }
    if (distance < previous) {
      throw InvalidParamsError("collision positions are out of order");
    }
    previous = distance;
    const double weight = source.weight(i);
    if (distance <= tolerance) {
      merged.degenerate_weight += weight;
    } else if (!merged.points.empty() && distance - sign * merged.points.back().location <= tolerance) {
      merged.points.back().weight += weight;
    } else {
      merged.points.push_back({positions[i], weight});
    }
  }
  return merged;
}

}  // namespace

SleParams merge_collided_points(const SleParams& params, const CollisionPositions& positions, double tolerance) {
  SleParams merged;
  merged.kappa = params.kappa;
  merged.left = merge_side(params.left, positions.left, Side::kLeft, tolerance);
  merged.right = merge_side(params.right, positions.right, Side::kRight, tolerance);
  return merged;
}

}  // namespace slerev
