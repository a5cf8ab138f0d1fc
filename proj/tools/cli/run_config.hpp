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


#ifndef SLEREV_CLI_RUN_CONFIG_HPP
#define SLEREV_CLI_RUN_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slerev/loewner.hpp"
#include "slerev/params.hpp"
#include "slerev/sle_sampler.hpp"

/// \file
/// \brief Flat key=value run configuration shared by all subcommands.

namespace slerev::cli {

/// Unreadable, unknown or mistyped configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string name;
  /// Empty when the key is optional and has no default.
  std::string default_value;
  std::string help;
  /// Keys that only steer where or how results are written stay out of the digest.
  bool in_digest = true;
};

[[nodiscard]] const std::vector<KeySpec>& known_keys();

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError naming the line.
[[nodiscard]] std::map<std::string, std::string> parse_config_text(std::string_view text);
[[nodiscard]] std::map<std::string, std::string> read_config_file(const std::string& path);

struct RunConfig {
  /// Every known key with its effective value (defaults filled in).
  std::map<std::string, std::string> entries;
  SleParams params;
  SamplerConfig sampler;
  TraceOptions trace;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double truncation_fraction = 0.25;
  double alpha_scale = 1.0;
  double ess_floor = 100.0;
  std::size_t bootstrap = 500;
  double family_level = 0.05;
  std::optional<std::vector<double>> alpha_left;
  std::optional<std::vector<double>> alpha_right;
  std::string out_dir;
  bool svg = false;
  double plot_extent = 3.0;
  std::uint64_t digest = 0;
};

/// Fills defaults, converts values and checks list lengths. Parameter validity (ordering,
/// thresholds) is left to validate_params. Throws ConfigError.
[[nodiscard]] RunConfig resolve(const std::map<std::string, std::string>& entries);

/// Parameters in the same key=value form they are read from, with powers when present.
[[nodiscard]] std::string format_params(const SleParams& params, const std::vector<double>* left_alphas = nullptr,
                                        const std::vector<double>* right_alphas = nullptr);

/// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_number(double x);

}  // namespace slerev::cli

#endif  // SLEREV_CLI_RUN_CONFIG_HPP
