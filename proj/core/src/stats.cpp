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

#include "slerev/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "slerev/rng.hpp"

namespace slerev {

std::vector<double> WeightedEnsemble::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& row : observables) {
    out.push_back(row.at(j));
  }
  return out;
}

void WeightedEnsemble::add(std::vector<double> row, double log_weight, std::uint64_t stream) {
  if (!observables.empty() && row.size() != observables.front().size()) {
    throw std::invalid_argument("observable rows differ in length");
  }
  if (!std::isfinite(log_weight)) {
    throw std::invalid_argument("log-weights must be finite");
  }
  observables.push_back(std::move(row));
  log_weights.push_back(log_weight);
  streams.push_back(stream);
}

double rn_log_weight(std::span<const ComponentRecord> records, const TiltedParams& tilted) {
  double total = 0.0;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& alphas = tilted.alphas(s);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      if (alphas[k] == 0.0) {
        continue;
      }
      const std::size_t index = k + 1;
      const auto it = std::find_if(records.begin(), records.end(),
                                   [&](const ComponentRecord& r) { return r.side == s && r.index == index; });
      if (it == records.end()) {
        std::ostringstream out;
        out << "no weight factor for force point " << index << to_string(s);
        throw std::invalid_argument(out.str());
      }
      total += alphas[k] * std::log(it->factor);
    }
  }
  return total;
}

std::vector<double> normalized_weights(std::span<const double> log_weights) {
  std::vector<double> w(log_weights.begin(), log_weights.end());
  if (w.empty()) {
    return w;
  }
  const double top = *std::max_element(w.begin(), w.end());
  double sum = 0.0;
  for (auto& x : w) {
    x = std::exp(x - top);
    sum += x;
  }
  for (auto& x : w) {
    x /= sum;
  }
  return w;
}

double ess(std::span<const double> log_weights) {
  const auto w = normalized_weights(log_weights);
  double sq = 0.0;
  for (const double x : w) {
    sq += x * x;
  }
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

double ess(const WeightedEnsemble& ensemble) { return ess(ensemble.log_weights); }

ZEstimate estimate_Z(const WeightedEnsemble& ensemble, std::size_t replicates, std::uint64_t seed) {
  const std::size_t n = ensemble.size();
  if (n == 0) {
    throw std::invalid_argument("Z of an empty ensemble");
  }
  std::vector<double> w(n);
  std::transform(ensemble.log_weights.begin(), ensemble.log_weights.end(), w.begin(),
                 [](double lw) { return std::exp(lw); });
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n);
  if (!(mean > 0.0)) {
    throw std::invalid_argument("all weights are zero");
  }
  if (replicates < 2) {
    return {mean, 0.0};
  }
  std::vector<double> means(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    CounterRng rng(seed, r);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += w[pick(rng)];
    }
    means[r] = sum / static_cast<double>(n);
  }
  const double centre = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(replicates);
  double var = 0.0;
  for (const double m : means) {
    var += (m - centre) * (m - centre);
  }
  var /= static_cast<double>(replicates - 1);
  return {mean, std::sqrt(var)};
}

namespace {

// Pooled values in sorted order, with group boundaries for ties.
struct Pooled {
  struct Entry {
    double value;
    bool from_a;
    std::size_t index;
  };
  std::vector<Entry> entries;
  // group_end[g] is one past the last entry of tie group g.
  std::vector<std::size_t> group_end;

  Pooled(std::span<const double> a, std::span<const double> b) {
    entries.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      entries.push_back({a[i], true, i});
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      entries.push_back({b[i], false, i});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.value < y.value; });
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k + 1 == entries.size() || entries[k + 1].value != entries[k].value) {
        group_end.push_back(k + 1);
      }
    }
  }

  // Fa - Fb at the end of every tie group; weights need not be normalized.
  [[nodiscard]] std::vector<double> differences(std::span<const double> wa, std::span<const double> wb) const {
    const double sa = std::accumulate(wa.begin(), wa.end(), 0.0);
    const double sb = std::accumulate(wb.begin(), wb.end(), 0.0);
    std::vector<double> diff;
    diff.reserve(group_end.size());
    double fa = 0.0;
    double fb = 0.0;
    std::size_t k = 0;
    for (const std::size_t end : group_end) {
      for (; k < end; ++k) {
        const auto& e = entries[k];
        if (e.from_a) {
          fa += wa[e.index];
        } else {
          fb += wb[e.index];
        }
      }
      diff.push_back(fa / sa - fb / sb);
    }
    return diff;
  }
};

double sup_abs(const std::vector<double>& d) {
  double best = 0.0;
  for (const double x : d) {
    best = std::max(best, std::abs(x));
  }
  return best;
}

}  // namespace

double weighted_ks_statistic(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                             std::span<const double> wb) {
  if (a.size() != wa.size() || b.size() != wb.size() || a.empty() || b.empty()) {
    throw std::invalid_argument("weighted KS needs nonempty samples with one weight each");
  }
  return std::min(1.0, sup_abs(Pooled(a, b).differences(wa, wb)));
}

KsResult weighted_ks(const WeightedEnsemble& a, const WeightedEnsemble& b, std::size_t observable,
                     const KsOptions& options) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("weighted KS needs at least two samples per ensemble");
  }
  KsResult result{};
  result.ess_a = ess(a);
  result.ess_b = ess(b);
  if (result.ess_a < options.ess_floor || result.ess_b < options.ess_floor) {
    std::ostringstream out;
    out << "effective sample size " << std::min(result.ess_a, result.ess_b) << " below the floor "
        << options.ess_floor;
    throw InsufficientEssError(out.str(), std::min(result.ess_a, result.ess_b));
  }
  const auto xa = a.column(observable);
  const auto xb = b.column(observable);
  const auto wa = normalized_weights(a.log_weights);
  const auto wb = normalized_weights(b.log_weights);
  const Pooled pooled(xa, xb);
  const auto observed = pooled.differences(wa, wb);
  result.statistic = std::min(1.0, sup_abs(observed));

  std::size_t exceed = 0;
  std::vector<double> ra(wa.size());
  std::vector<double> rb(wb.size());
  for (std::size_t r = 0; r < options.replicates; ++r) {
    CounterRng rng(options.seed, options.stream_offset + r);
    const auto resample = [&rng](const std::vector<double>& w, std::vector<double>& out) {
      std::fill(out.begin(), out.end(), 0.0);
      std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t j = pick(rng);
        out[j] += w[j];
      }
    };
    resample(wa, ra);
    resample(wb, rb);
    const auto replicate = pooled.differences(ra, rb);
    double d = 0.0;
    for (std::size_t g = 0; g < replicate.size(); ++g) {
      d = std::max(d, std::abs(replicate[g] - observed[g]));
    }
    // Guard the comparison against rounding in exact-tie cases.
    if (d >= result.statistic * (1.0 - 1e-12)) {
      ++exceed;
    }
  }
  result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + options.replicates);
  return result;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p_values[i] < p_values[j]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double value = std::min(1.0, static_cast<double>(m - k) * p_values[order[k]]);
    running = std::max(running, value);
    adjusted[order[k]] = running;
  }
  return adjusted;
}

}  // namespace slerev
