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

#include "slerev/io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>

namespace slerev {

std::uint64_t config_digest(const std::map<std::string, std::string>& entries) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto feed = [&hash](const std::string& s) {
    for (const unsigned char c : s) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
  };
  for (const auto& [key, value] : entries) {
    feed(key + "=" + value + "\n");
  }
  return hash;
}

std::string digest_hex(std::uint64_t digest) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(digest));
  return buffer;
}

namespace {

void header(std::ostream& out, std::uint64_t digest) {
  out << "# config_digest=" << digest_hex(digest) << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
}

}  // namespace

void write_trace_csv(std::ostream& out, const CurveTrace& trace, std::uint64_t digest) {
  header(out, digest);
  out << "t,re,im\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << trace.times[k] << ',' << trace.points[k].real() << ',' << trace.points[k].imag() << '\n';
  }
}

void write_chain_csv(std::ostream& out, const LoewnerChain& chain, std::uint64_t digest) {
  header(out, digest);
  out << "dt,w\n";
  for (const auto& step : chain.steps()) {
    out << step.dt << ',' << step.w << '\n';
  }
}

void write_driving_csv(std::ostream& out, const DrivingPath& path, std::uint64_t digest) {
  header(out, digest);
  out << "t,w";
  for (std::size_t i = 0; i < path.v_left.size(); ++i) {
    out << ",v_L" << i;
  }
  for (std::size_t i = 0; i < path.v_right.size(); ++i) {
    out << ",v_R" << i;
  }
  out << '\n';
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out << path.times[k] << ',' << path.w[k];
    for (const auto& series : path.v_left) {
      out << ',' << series[k];
    }
    for (const auto& series : path.v_right) {
      out << ',' << series[k];
    }
    out << '\n';
  }
}

void write_observables_csv(std::ostream& out, const std::vector<std::string>& names, const WeightedEnsemble& ensemble,
                           std::uint64_t digest) {
  header(out, digest);
  out << "sample_id";
  for (const auto& name : names) {
    out << ",\"" << name << '"';
  }
  out << ",log_weight\n";
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    out << ensemble.streams[i];
    for (const double x : ensemble.observables[i]) {
      out << ',' << x;
    }
    out << ',' << ensemble.log_weights[i] << '\n';
  }
}

void write_components_csv(std::ostream& out, const std::vector<ComponentRow>& rows, std::uint64_t digest) {
  header(out, digest);
  out << "sample_id,side,index,factor,trunc_err\n";
  for (const auto& row : rows) {
    out << row.sample_id << ',' << to_string(row.record.side) << ',' << row.record.index << ',' << row.record.factor
        << ',' << row.record.truncation_error << '\n';
  }
}

void write_svg(std::ostream& out, const std::vector<SvgCurve>& curves, const std::vector<double>& marked,
               double extent, std::uint64_t digest) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 420.0;
  const double scale = kWidth / (2.0 * extent);
  const auto px = [&](Complex z) { return std::pair{kWidth / 2 + z.real() * scale, kHeight - 20 - z.imag() * scale}; };
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<!-- config_digest=" << digest_hex(digest) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"0\" y1=\"" << kHeight - 20 << "\" x2=\"" << kWidth << "\" y2=\"" << kHeight - 20
      << "\" stroke=\"black\"/>\n";
  double legend_y = 20;
  for (const auto& curve : curves) {
    out << "<polyline fill=\"none\" stroke=\"" << curve.color << "\" stroke-width=\"1\" points=\"";
    for (const Complex z : curve.points) {
      if (std::abs(z.real()) > 4 * extent || z.imag() > 4 * extent) {
        continue;
      }
      const auto [x, y] = px(z);
      out << x << ',' << y << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"10\" y=\"" << legend_y << "\" fill=\"" << curve.color << "\">" << curve.label << "</text>\n";
    legend_y += 18;
  }
  for (const double x : marked) {
    const auto [cx, cy] = px(Complex{x, 0.0});
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace slerev
