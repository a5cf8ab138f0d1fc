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

#ifndef SLEREV_STATS_HPP
#define SLEREV_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slerev/geometry.hpp"
#include "slerev/params.hpp"

/// \file
/// \brief Weighted ensembles, importance weights and weighted two-sample tests.

namespace slerev {

struct WeightedEnsemble {
  /// One row of observables per sample.
  std::vector<std::vector<double>> observables;
  /// Unnormalized log-weights; all zero for a plain ensemble.
  std::vector<double> log_weights;
  /// RNG stream of each sample.
  std::vector<std::uint64_t> streams;
  std::uint64_t seed = 0;
  std::uint64_t params_digest = 0;

  [[nodiscard]] std::size_t size() const noexcept { return observables.size(); }
  [[nodiscard]] std::vector<double> column(std::size_t j) const;
  /// Appends a sample; the row length must match earlier rows.
  void add(std::vector<double> row, double log_weight, std::uint64_t stream);
};

/// sum over records of alpha * log(factor). Records for zero powers are ignored; a nonzero power
/// without a record throws std::invalid_argument.
[[nodiscard]] double rn_log_weight(std::span<const ComponentRecord> records, const TiltedParams& tilted);

/// Weights exp(log_weight - max) divided by their sum.
[[nodiscard]] std::vector<double> normalized_weights(std::span<const double> log_weights);

/// (sum w)^2 / sum w^2.
[[nodiscard]] double ess(std::span<const double> log_weights);
[[nodiscard]] double ess(const WeightedEnsemble& ensemble);

struct ZEstimate {
  double value;
  double standard_error;
};

/// Mean of exp(log_weight) with a bootstrap standard error over `replicates` resamples.
/// Throws std::invalid_argument when the ensemble is empty or every weight is zero.
[[nodiscard]] ZEstimate estimate_Z(const WeightedEnsemble& ensemble, std::size_t replicates = 500,
                                   std::uint64_t seed = 0);

struct KsOptions {
  std::size_t replicates = 500;
  std::uint64_t seed = 0;
  /// Replicate r draws from stream stream_offset + r.
  std::uint64_t stream_offset = 0;
  /// Both ensembles need at least this effective sample size.
  double ess_floor = 100.0;
};

struct KsResult {
  double statistic;
  double p_value;
  double ess_a;
  double ess_b;
};

/// Sup distance between the self-normalized weighted empirical distribution functions of the
/// given values. Ties are grouped.
[[nodiscard]] double weighted_ks_statistic(std::span<const double> a, std::span<const double> wa,
                                           std::span<const double> b, std::span<const double> wb);

/// Statistic plus a bootstrap p-value. Each replicate resamples both ensembles uniformly with
/// replacement, keeps the importance weights of the drawn samples and measures the sup distance of
/// the replicate difference Fa* - Fb* from the observed difference Fa - Fb; the p-value is
/// (1 + #{D* >= D}) / (1 + replicates). Throws InsufficientEssError below the ESS floor.
[[nodiscard]] KsResult weighted_ks(const WeightedEnsemble& a, const WeightedEnsemble& b, std::size_t observable,
                                   const KsOptions& options = {});

/// Holm step-down adjusted p-values, in the input order.
[[nodiscard]] std::vector<double> holm_adjust(std::span<const double> p_values);

}  // namespace slerev

#endif  // SLEREV_STATS_HPP
