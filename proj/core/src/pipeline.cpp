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

#include "slerev/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "slerev/parallel.hpp"

namespace slerev {

SampledCurve sample_curve(const SleParams& params, const SamplerConfig& sampler, const TraceOptions& trace,
                          std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  SampledCurve out;
  out.path = sample_driving(params, sampler, rng);
  out.chain = path_to_chain(out.path);
  out.trace = trace_curve(out.chain, trace);
  return out;
}

std::vector<ComponentRecord> weight_records(const LoewnerChain& chain, const TiltedParams& tilted,
                                            double truncation_fraction) {
  std::vector<ComponentRecord> records;
  TruncationPolicy policy;
  policy.T = truncation_fraction * chain.total_capacity();
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& alphas = tilted.alphas(s);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      if (alphas[k] != 0.0) {
        records.push_back(component_weight_factor(chain, tilted.base, k + 1, s, policy));
      }
    }
  }
  return records;
}

std::optional<std::string> unsupported_reason(const TiltedParams& tilted) {
  const auto& p = tilted.base;
  const double bound = hitting_bound(p.kappa);
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& alphas = tilted.alphas(s);
    const auto& side = p.side(s);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      if (alphas[k] == 0.0) {
        continue;
      }
      std::ostringstream out;
      if (p.kappa > 4.0) {
        out << "weighted force point " << k + 1 << to_string(s) << " with kappa = " << p.kappa
            << " > 4: complementary components of non-simple curves are not supported";
        return out.str();
      }
      for (std::size_t j = k + 1; j < side.count(); ++j) {
        if (side.partial_sum(j) < bound) {
          out << "weighted force point " << k + 1 << to_string(s) << " can be swallowed: partial sum "
              << side.partial_sum(j) << " at index " << j << " is below " << bound;
          return out.str();
        }
      }
    }
  }
  return std::nullopt;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
    case Verdict::kUnsupported:
      return "unsupported";
  }
  return "unknown";
}

namespace {

struct SampleRow {
  std::vector<double> observables;
  double log_weight = 0.0;
  bool excluded = false;
  bool stopped = false;
  std::size_t bridge_splits = 0;
  std::size_t forced_absorptions = 0;
  std::vector<ComponentRecord> records;
};

}  // namespace

VerifyReport verify(const VerifyConfig& config) {
  VerifyReport report;
  report.hatted = reverse_params(config.params);
  const auto& hatted = report.hatted;
  if (!hatted.unweighted()) {
    if (auto reason = unsupported_reason(hatted)) {
      report.verdict = Verdict::kUnsupported;
      report.message = *reason;
      return report;
    }
  }
  report.grid = config.grid.value_or(default_grid(hatted.base));
  report.observable_names = observable_names(report.grid);

  const std::size_t n = config.n_samples;
  std::vector<SampleRow> forward(n);
  std::vector<SampleRow> backward(n);
  parallel_for(2 * n, config.workers, [&](std::size_t job) {
    const std::size_t i = job / 2;
    if (job % 2 == 0) {
      auto curve = sample_curve(config.params, config.sampler, config.trace, config.seed, forward_stream(i));
      const auto reversed = reverse_curve(curve.trace);
      auto& row = forward[i];
      row.observables = to_row(evaluate(reversed.points, report.grid));
      row.stopped = curve.path.stopped_at.has_value();
      row.bridge_splits = curve.path.bridge_splits;
      row.forced_absorptions = curve.path.forced_absorptions;
      if (i == 0) {
        report.example_forward = curve.trace.points;
        report.example_reversed = reversed.points;
      }
      return;
    }
    auto curve = sample_curve(hatted.base, config.sampler, config.trace, config.seed, hatted_stream(i));
    auto& row = backward[i];
    row.observables = to_row(evaluate(curve.trace.points, report.grid));
    row.stopped = curve.path.stopped_at.has_value();
    row.bridge_splits = curve.path.bridge_splits;
    row.forced_absorptions = curve.path.forced_absorptions;
    if (!hatted.unweighted()) {
      try {
        row.records = weight_records(curve.chain, hatted, config.truncation_fraction);
        row.log_weight = config.alpha_scale * rn_log_weight(row.records, hatted);
      } catch (const SwallowedPointError&) {
        row.excluded = true;
      }
    }
    if (i == 0) {
      report.example_hatted = curve.trace.points;
    }
  });

  report.forward.seed = report.hatted_ensemble.seed = config.seed;
  report.forward.params_digest = report.hatted_ensemble.params_digest = config.config_digest;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto* row : {&forward[i], &backward[i]}) {
      report.threshold_stops += row->stopped ? 1 : 0;
      report.bridge_splits += row->bridge_splits;
      report.forced_absorptions += row->forced_absorptions;
    }
    report.forward.add(std::move(forward[i].observables), 0.0, forward_stream(i));
    if (backward[i].excluded) {
      ++report.excluded;
      continue;
    }
    for (const auto& r : backward[i].records) {
      report.max_truncation_error = std::max(report.max_truncation_error, r.truncation_error);
    }
    report.hatted_ensemble.add(std::move(backward[i].observables), backward[i].log_weight, hatted_stream(i));
    report.records.push_back(std::move(backward[i].records));
  }

  if (static_cast<double>(report.excluded) > config.max_excluded_fraction * static_cast<double>(n)) {
    std::ostringstream out;
    out << report.excluded << " of " << n << " hatted samples swallowed a weighted force point";
    report.verdict = Verdict::kUnsupported;
    report.message = out.str();
    return report;
  }
  report.ess_forward = ess(report.forward);
  report.ess_hatted = ess(report.hatted_ensemble);
  if (report.hatted_ensemble.size() > 0) {
    report.z = estimate_Z(report.hatted_ensemble, config.bootstrap, config.seed);
  }

  auto family = compare_ensembles(report.forward, report.hatted_ensemble, report.observable_names, config);
  report.verdict = family.verdict;
  report.message = std::move(family.message);
  report.tests = std::move(family.tests);
  return report;
}

FamilyResult compare_ensembles(const WeightedEnsemble& a, const WeightedEnsemble& b,
                               const std::vector<std::string>& names, const VerifyConfig& config) {
  FamilyResult result;
  const std::size_t m = names.size();
  std::vector<double> p_values;
  try {
    for (std::size_t j = 0; j < m; ++j) {
      KsOptions options;
      options.replicates = config.bootstrap;
      options.seed = config.seed ^ 0x9E3779B97F4A7C15ULL;
      options.stream_offset = static_cast<std::uint64_t>(j) << 32U;
      options.ess_floor = config.ess_floor;
      const auto ks = weighted_ks(a, b, j, options);
      result.tests.push_back({names[j], ks.statistic, ks.p_value, 1.0});
      p_values.push_back(ks.p_value);
    }
  } catch (const InsufficientEssError& e) {
    result.tests.clear();
    result.verdict = Verdict::kInconclusive;
    result.message = e.what();
    return result;
  }
  const auto adjusted = holm_adjust(p_values);
  std::size_t rejected = 0;
  for (std::size_t j = 0; j < m; ++j) {
    result.tests[j].p_holm = adjusted[j];
    rejected += adjusted[j] < config.family_level ? 1 : 0;
  }
  result.verdict = rejected > 0 ? Verdict::kFail : Verdict::kPass;
  std::ostringstream out;
  out << rejected << " of " << m << " observables rejected at family level " << config.family_level;
  result.message = out.str();
  return result;
}

}  // namespace slerev
