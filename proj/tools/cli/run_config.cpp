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


#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "slerev/io.hpp"

namespace slerev::cli {

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      {"kappa", "2", "SLE parameter kappa"},
      {"x_left", "", "left force point locations, negative, increasing distance from 0"},
      {"rho_left", "", "left weights; one more entry than x_left puts the first on 0^-"},
      {"x_right", "", "right force point locations, positive, increasing"},
      {"rho_right", "", "right weights; one more entry than x_right puts the first on 0^+"},
      {"alpha_left", "", "powers of the left weight factors (weights command)"},
      {"alpha_right", "", "powers of the right weight factors (weights command)"},
      {"T", "25", "target half-plane capacity"},
      {"dt_max", "1e-3", "largest capacity step"},
      {"epsilon0", "auto", "offset of the degenerate points 0^-/0^+"},
      {"delta_sing", "1e-9", "floor of the gap entering the step size"},
      {"dt_ramp", "0.25", "capacity over which the step cap grows linearly to dt_max"},
      {"seed", "1", "master seed"},
      {"n_samples", "2000", "trajectories per ensemble"},
      {"workers", "1", "threads", false},
      {"trace_resolution", "0.02", "relative spacing of traced curve points"},
      {"truncation_fraction", "0.25", "weight factors are evaluated at this fraction of T, then doubled"},
      {"bootstrap", "500", "bootstrap replicates for p-values and Z"},
      {"ess_floor", "100", "ESS below which a comparison is inconclusive"},
      {"family_level", "0.05", "Holm family-wise level"},
      {"alpha_scale", "1", "multiplier on the reversed powers (negative control: -1)"},
      {"out_dir", ".", "directory for written files", false},
      {"svg", "false", "verify: also write verify.svg", false},
      {"plot_extent", "3", "half-width of the plotted window", false},
  };
  return keys;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const KeySpec* find_key(std::string_view name) {
  const auto& keys = known_keys();
  const auto it = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == name; });
  return it == keys.end() ? nullptr : &*it;
}

double to_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(key + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

std::uint64_t to_unsigned(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(key + ": '" + std::string(text) + "' is not a nonnegative integer");
  }
  return value;
}

std::vector<double> to_list(const std::string& key, std::string_view text) {
  std::vector<double> values;
  text = trim(text);
  if (text.empty()) {
    return values;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    values.push_back(to_double(key, text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) {
      return values;
    }
    start = comma + 1;
  }
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

SideParams to_side(const std::string& side, const std::vector<double>& x, const std::vector<double>& rho) {
  SideParams out;
  std::size_t offset = 0;
  if (rho.size() == x.size() + 1) {
    out.degenerate_weight = rho.front();
    offset = 1;
  } else if (rho.size() != x.size()) {
    std::ostringstream msg;
    msg << "rho_" << side << " has " << rho.size() << " entries for " << x.size() << " points in x_" << side
        << " (expected " << x.size() << " or " << x.size() + 1 << ")";
    throw ConfigError(msg.str());
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.points.push_back({x[i], rho[i + offset]});
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (find_key(key) == nullptr) {
      throw ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    if (!entries.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError("line " + std::to_string(line_number) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

RunConfig resolve(const std::map<std::string, std::string>& given) {
  RunConfig config;
  for (const auto& [key, value] : given) {
    if (find_key(key) == nullptr) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  std::map<std::string, std::string> digest_entries;
  for (const auto& spec : known_keys()) {
    const auto it = given.find(spec.name);
    const std::string value = it != given.end() ? it->second : spec.default_value;
    config.entries[spec.name] = value;
    if (spec.in_digest) {
      digest_entries[spec.name] = value;
    }
  }
  const auto& e = config.entries;
  const auto number = [&](const char* key) { return to_double(key, e.at(key)); };
  const auto count = [&](const char* key) { return to_unsigned(key, e.at(key)); };

  config.params.kappa = number("kappa");
  config.params.left = to_side("left", to_list("x_left", e.at("x_left")), to_list("rho_left", e.at("rho_left")));
  config.params.right =
      to_side("right", to_list("x_right", e.at("x_right")), to_list("rho_right", e.at("rho_right")));
  for (const auto& [key, side] : {std::pair{"alpha_left", Side::kLeft}, std::pair{"alpha_right", Side::kRight}}) {
    if (e.at(key).empty()) {
      continue;
    }
    auto alphas = to_list(key, e.at(key));
    if (alphas.size() != config.params.side(side).points.size()) {
      std::ostringstream msg;
      msg << key << " has " << alphas.size() << " entries for " << config.params.side(side).points.size()
          << " force points";
      throw ConfigError(msg.str());
    }
    (side == Side::kLeft ? config.alpha_left : config.alpha_right) = std::move(alphas);
  }

  config.sampler.T = number("T");
  config.sampler.dt_max = number("dt_max");
  if (e.at("epsilon0") != "auto") {
    config.sampler.epsilon0 = number("epsilon0");
  }
  config.sampler.delta_sing = number("delta_sing");
  config.sampler.dt_ramp = number("dt_ramp");
  config.seed = count("seed");
  config.n_samples = count("n_samples");
  config.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, count("workers")));
  config.trace.relative_resolution = number("trace_resolution");
  config.truncation_fraction = number("truncation_fraction");
  config.bootstrap = count("bootstrap");
  config.ess_floor = number("ess_floor");
  config.family_level = number("family_level");
  config.alpha_scale = number("alpha_scale");
  config.out_dir = e.at("out_dir");
  config.svg = to_bool("svg", e.at("svg"));
  config.plot_extent = number("plot_extent");

  if (!(config.trace.relative_resolution > 0.0)) {
    throw ConfigError("trace_resolution must be positive");
  }
  if (!(config.truncation_fraction > 0.0 && config.truncation_fraction <= 1.0)) {
    throw ConfigError("truncation_fraction must lie in (0, 1]");
  }
  if (!(config.family_level > 0.0 && config.family_level < 1.0)) {
    throw ConfigError("family_level must lie in (0, 1)");
  }
  if (!(config.plot_extent > 0.0)) {
    throw ConfigError("plot_extent must be positive");
  }
  config.digest = config_digest(digest_entries);
  return config;
}

std::string format_number(double x) {
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), x);
  return ec == std::errc{} ? std::string(buffer.data(), end) : std::string("nan");
}

std::string format_params(const SleParams& params, const std::vector<double>* left_alphas,
                          const std::vector<double>* right_alphas) {
  const auto join = [](const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += (i ? "," : "") + format_number(values[i]);
    }
    return out;
  };
  std::ostringstream out;
  out << "kappa=" << format_number(params.kappa) << '\n';
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& side = params.side(s);
    const char* name = s == Side::kLeft ? "left" : "right";
    std::vector<double> x;
    std::vector<double> rho{side.degenerate_weight};
    for (const auto& p : side.points) {
      x.push_back(p.location);
      rho.push_back(p.weight);
    }
    out << "x_" << name << '=' << join(x) << '\n';
    out << "rho_" << name << '=' << join(rho) << '\n';
  }
  if (left_alphas != nullptr) {
    out << "alpha_left=" << join(*left_alphas) << '\n';
  }
  if (right_alphas != nullptr) {
    out << "alpha_right=" << join(*right_alphas) << '\n';
  }
  return out.str();
}

}  // namespace slerev::cli
