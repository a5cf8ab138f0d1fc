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

#ifndef SLEREV_COMMON_HPP
#define SLEREV_COMMON_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace slerev {

/// Side of the real line relative to the curve's starting point.
enum class Side { kLeft, kRight };

/// +1 for the right side, -1 for the left side.
constexpr double side_sign(Side side) noexcept { return side == Side::kRight ? 1.0 : -1.0; }

constexpr Side opposite(Side side) noexcept { return side == Side::kRight ? Side::kLeft : Side::kRight; }

constexpr std::string_view to_string(Side side) noexcept { return side == Side::kRight ? "R" : "L"; }

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters are malformed or violate the continuation-threshold bound.
class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

/// A point was absorbed into the hull before the requested capacity time.
class SwallowedPointError : public Error {
 public:
  SwallowedPointError(const std::string& what, double time) : Error(what), time_(time) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The hull geometry around a force point is outside the supported regimes.
class UnsupportedGeometryError : public Error {
 public:
  using Error::Error;
};

/// A weighted ensemble is too degenerate for a meaningful comparison.
class InsufficientEssError : public Error {
 public:
  InsufficientEssError(const std::string& what, double ess) : Error(what), ess_(ess) {}
  [[nodiscard]] double ess() const noexcept { return ess_; }

 private:
  double ess_;
};

/// Malformed configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace slerev

#endif  // SLEREV_COMMON_HPP
