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

#ifndef SLEREV_PIPELINE_HPP
#define SLEREV_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slerev/geometry.hpp"
#include "slerev/observables.hpp"
#include "slerev/params.hpp"
#include "slerev/sle_sampler.hpp"
#include "slerev/stats.hpp"

/// \file
/// \brief End-to-end reversal check: reversed forward curves against weighted hatted curves.

namespace slerev {

/// Stream ids: sample i of the forward ensemble uses 2i, of the hatted ensemble 2i + 1.
[[nodiscard]] constexpr std::uint64_t forward_stream(std::size_t i) noexcept { return 2 * static_cast<std::uint64_t>(i); }
[[nodiscard]] constexpr std::uint64_t hatted_stream(std::size_t i) noexcept { return 2 * static_cast<std::uint64_t>(i) + 1; }

/// One sampled curve with everything derived from it.
struct SampledCurve {
  DrivingPath path;
  LoewnerChain chain;
  CurveTrace trace;
};

[[nodiscard]] SampledCurve sample_curve(const SleParams& params, const SamplerConfig& sampler,
                                        const TraceOptions& trace, std::uint64_t seed, std::uint64_t stream);

/// Weight factors for every nonzero power. Throws SwallowedPointError when such a point is
/// swallowed before the truncation capacity.
[[nodiscard]] std::vector<ComponentRecord> weight_records(const LoewnerChain& chain, const TiltedParams& tilted,
                                                          double truncation_fraction);

/// Why a weighted configuration cannot be handled, or nullopt when it can. Nonzero powers are
/// supported only for kappa <= 4 and for points no partial sum from their own index outward can
/// let the curve reach.
[[nodiscard]] std::optional<std::string> unsupported_reason(const TiltedParams& tilted);

struct VerifyConfig {
  SleParams params;
  SamplerConfig sampler;
  TraceOptions trace;
  std::size_t n_samples = 2000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Weight factors are evaluated at this fraction of the sampled capacity, then doubled.
  double truncation_fraction = 0.25;
  /// Multiplies every log-weight; -1 flips the powers.
  double alpha_scale = 1.0;
  double ess_floor = 100.0;
  std::size_t bootstrap = 500;
  double family_level = 0.05;
  /// Largest fraction of hatted samples that may be dropped for swallowing a weighted point.
  double max_excluded_fraction = 0.01;
  /// Defaults to default_grid of the hatted parameters.
  std::optional<GridConfig> grid;
  std::uint64_t config_digest = 0;
};

enum class Verdict { kPass, kFail, kInconclusive, kUnsupported };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct ObservableTest {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  double p_holm = 1.0;
};

struct VerifyReport {
  Verdict verdict = Verdict::kPass;
  std::string message;
  TiltedParams hatted;
  GridConfig grid;
  std::vector<std::string> observable_names;
  std::vector<ObservableTest> tests;
  WeightedEnsemble forward;
  WeightedEnsemble hatted_ensemble;
  /// Per hatted sample, the records that entered its weight.
  std::vector<std::vector<ComponentRecord>> records;
  double ess_forward = 0.0;
  double ess_hatted = 0.0;
  ZEstimate z{1.0, 0.0};
  double max_truncation_error = 0.0;
  std::size_t excluded = 0;
  std::size_t threshold_stops = 0;
  std::size_t bridge_splits = 0;
  std::size_t forced_absorptions = 0;
  /// Curves of sample 0, for plots.
  std::vector<Complex> example_forward;
  std::vector<Complex> example_reversed;
  std::vector<Complex> example_hatted;
};

/// Runs both ensembles and the Holm-corrected family of weighted KS tests.
[[nodiscard]] VerifyReport verify(const VerifyConfig& config);

struct FamilyResult {
  Verdict verdict = Verdict::kPass;
  std::string message;
  std::vector<ObservableTest> tests;
};

/// Weighted KS test of every observable column of `a` against `b`, Holm-corrected at
/// config.family_level; the test stage of verify(). Uses config.seed, bootstrap and ess_floor.
[[nodiscard]] FamilyResult compare_ensembles(const WeightedEnsemble& a, const WeightedEnsemble& b,
                                             const std::vector<std::string>& names, const VerifyConfig& config);

}  // namespace slerev

#endif  // SLEREV_PIPELINE_HPP
