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

#ifndef SLEREV_IO_HPP
#define SLEREV_IO_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "slerev/geometry.hpp"
#include "slerev/loewner.hpp"
#include "slerev/sle_sampler.hpp"
#include "slerev/stats.hpp"

/// \file
/// \brief CSV and SVG writers. Every file starts with a "# config_digest=<hex>" line.

namespace slerev {

/// FNV-1a (64 bit) over "key=value\n" lines in key order.
[[nodiscard]] std::uint64_t config_digest(const std::map<std::string, std::string>& entries);
[[nodiscard]] std::string digest_hex(std::uint64_t digest);

void write_trace_csv(std::ostream& out, const CurveTrace& trace, std::uint64_t digest);
void write_chain_csv(std::ostream& out, const LoewnerChain& chain, std::uint64_t digest);
/// Columns t, w, then one per force point: v_L0.., v_R0..
void write_driving_csv(std::ostream& out, const DrivingPath& path, std::uint64_t digest);
/// sample_id, one column per observable, log_weight.
void write_observables_csv(std::ostream& out, const std::vector<std::string>& names, const WeightedEnsemble& ensemble,
                           std::uint64_t digest);

struct ComponentRow {
  std::uint64_t sample_id;
  ComponentRecord record;
};

void write_components_csv(std::ostream& out, const std::vector<ComponentRow>& rows, std::uint64_t digest);

struct SvgCurve {
  std::vector<Complex> points;
  std::string color;
  std::string label;
};

/// Curves clipped to the window [-extent, extent] x [0, extent], force points as dots on the axis.
void write_svg(std::ostream& out, const std::vector<SvgCurve>& curves, const std::vector<double>& marked,
               double extent, std::uint64_t digest);

}  // namespace slerev

#endif  // SLEREV_IO_HPP
