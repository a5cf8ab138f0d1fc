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


#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "slerev/io.hpp"
#include "slerev/parallel.hpp"
#include "slerev/pipeline.hpp"

namespace slerev::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  const auto path = fs::path(config.out_dir) / name;
  std::ofstream file(path);
  if (!file) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  file << std::setprecision(17);
  return file;
}

void require_valid(const SleParams& params) {
  const auto report = validate_params(params);
  if (!report.ok()) {
    throw ConfigError(report.message);
  }
}

std::string sample_file(const char* stem, std::size_t i) { return std::string(stem) + "_" + std::to_string(i) + ".csv"; }

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto report = validate_params(config.params);
  if (report.ok()) {
    out << "valid\n";
    return kExitPass;
  }
  if (report.status == Validity::kThresholdViolation) {
    err << "threshold violation: side=" << to_string(*report.side) << " index=" << *report.index
        << " partial_sum=" << report.partial_sum << " bound=" << report.bound << '\n';
    return kExitFail;
  }
  err << "malformed parameters: " << report.message << '\n';
  return kExitConfig;
}

int cmd_reverse_params(const RunConfig& config, std::ostream& out, std::ostream&) {
  require_valid(config.params);
  const auto hat = reverse_params(config.params);
  out << "# config_digest=" << digest_hex(config.digest) << '\n';
  out << format_params(hat.base, &hat.left_alphas, &hat.right_alphas);
  return kExitPass;
}

struct PathStats {
  bool stopped = false;
  std::size_t steps = 0;
  std::size_t bridge_splits = 0;
  std::size_t forced_absorptions = 0;
};

void print_stats(std::ostream& out, const std::vector<PathStats>& stats) {
  PathStats total;
  for (const auto& s : stats) {
    total.stopped = false;
    total.steps += s.steps;
    total.bridge_splits += s.bridge_splits;
    total.forced_absorptions += s.forced_absorptions;
  }
  const auto stops = std::count_if(stats.begin(), stats.end(), [](const PathStats& s) { return s.stopped; });
  out << "samples=" << stats.size() << " steps=" << total.steps << " threshold_stops=" << stops
      << " bridge_splits=" << total.bridge_splits << " forced_absorptions=" << total.forced_absorptions << '\n';
}

PathStats stats_of(const DrivingPath& path) {
  return {path.stopped_at.has_value(), path.steps(), path.bridge_splits, path.forced_absorptions};
}

int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream&) {
  require_valid(config.params);
  std::vector<PathStats> stats(config.n_samples);
  parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    CounterRng rng(config.seed, forward_stream(i));
    const auto path = sample_driving(config.params, config.sampler, rng);
    auto file = open_output(config, sample_file("driving", i));
    write_driving_csv(file, path, config.digest);
    stats[i] = stats_of(path);
  });
  print_stats(out, stats);
  return kExitPass;
}

int cmd_trace(const RunConfig& config, std::ostream& out, std::ostream&) {
  require_valid(config.params);
  std::vector<PathStats> stats(config.n_samples);
  parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    const auto curve = sample_curve(config.params, config.sampler, config.trace, config.seed, forward_stream(i));
    auto trace_file = open_output(config, sample_file("trace", i));
    write_trace_csv(trace_file, curve.trace, config.digest);
    auto chain_file = open_output(config, sample_file("chain", i));
    write_chain_csv(chain_file, curve.chain, config.digest);
    stats[i] = stats_of(curve.path);
  });
  print_stats(out, stats);
  return kExitPass;
}

int cmd_weights(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_valid(config.params);
  TiltedParams tilted;
  tilted.base = config.params;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& given = s == Side::kLeft ? config.alpha_left : config.alpha_right;
    if (given) {
      tilted.alphas(s) = *given;
      continue;
    }
    for (const auto& p : config.params.side(s).points) {
      tilted.alphas(s).push_back(tilt_exponent(p.weight, config.params.kappa));
    }
  }
  if (auto reason = unsupported_reason(tilted)) {
    err << "unsupported geometry: " << *reason << '\n';
    return kExitUnsupported;
  }
  struct Row {
    std::vector<ComponentRecord> records;
    double log_weight = 0.0;
    bool excluded = false;
  };
  std::vector<Row> rows(config.n_samples);
  parallel_for(config.n_samples, config.workers, [&](std::size_t i) {
    CounterRng rng(config.seed, forward_stream(i));
    const auto chain = path_to_chain(sample_driving(config.params, config.sampler, rng));
    try {
      rows[i].records = weight_records(chain, tilted, config.truncation_fraction);
      rows[i].log_weight = rn_log_weight(rows[i].records, tilted);
    } catch (const SwallowedPointError&) {
      rows[i].excluded = true;
    }
  });

  std::vector<ComponentRow> components;
  WeightedEnsemble ensemble;
  ensemble.seed = config.seed;
  ensemble.params_digest = config.digest;
  auto weights_file = open_output(config, "weights.csv");
  weights_file << "# config_digest=" << digest_hex(config.digest) << "\nsample_id,log_weight\n";
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].excluded) {
      ++excluded;
      continue;
    }
    for (const auto& r : rows[i].records) {
      components.push_back({forward_stream(i), r});
    }
    weights_file << forward_stream(i) << ',' << rows[i].log_weight << '\n';
    ensemble.add({}, rows[i].log_weight, forward_stream(i));
  }
  auto components_file = open_output(config, "components.csv");
  write_components_csv(components_file, components, config.digest);

  out << "samples=" << config.n_samples << " excluded=" << excluded;
  if (ensemble.size() > 0) {
    const auto z = estimate_Z(ensemble, config.bootstrap, config.seed);
    out << " ess=" << ess(ensemble) << " Z=" << z.value << " se=" << z.standard_error;
  }
  out << '\n';
  if (static_cast<double>(excluded) > 0.01 * static_cast<double>(config.n_samples)) {
    err << "unsupported geometry: " << excluded << " samples swallowed a weighted force point\n";
    return kExitUnsupported;
  }
  return kExitPass;
}

VerifyConfig verify_config(const RunConfig& config) {
  VerifyConfig v;
  v.params = config.params;
  v.sampler = config.sampler;
  v.trace = config.trace;
  v.n_samples = config.n_samples;
  v.seed = config.seed;
  v.workers = config.workers;
  v.truncation_fraction = config.truncation_fraction;
  v.alpha_scale = config.alpha_scale;
  v.ess_floor = config.ess_floor;
  v.bootstrap = config.bootstrap;
  v.family_level = config.family_level;
  v.config_digest = config.digest;
  return v;
}

Json params_json(const SleParams& p) {
  Json j;
  j["kappa"] = p.kappa;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    const auto& side = p.side(s);
    Json points = Json::array();
    for (const auto& fp : side.points) {
      points.push_back({{"x", fp.location}, {"rho", fp.weight}});
    }
    j[s == Side::kLeft ? "left" : "right"] = {{"degenerate_rho", side.degenerate_weight}, {"points", points}};
  }
  return j;
}

// NaN and infinities are not representable in JSON.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json report_json(const RunConfig& config, const VerifyReport& report) {
  Json j;
  j["config_digest"] = digest_hex(config.digest);
  j["config"] = Json::object();
  for (const auto& key : known_keys()) {
    if (key.in_digest) {
      j["config"][key.name] = config.entries.at(key.name);
    }
  }
  j["verdict"] = to_string(report.verdict);
  j["message"] = report.message;
  j["seed"] = config.seed;
  j["n_samples"] = config.n_samples;
  j["streams"] = {{"forward", "2i"}, {"hatted", "2i+1"}};
  j["params"] = params_json(config.params);
  j["hatted"] = params_json(report.hatted.base);
  j["hatted"]["alpha_left"] = report.hatted.left_alphas;
  j["hatted"]["alpha_right"] = report.hatted.right_alphas;
  j["alpha_scale"] = config.alpha_scale;
  j["ess"] = {{"forward", report.ess_forward}, {"hatted", report.ess_hatted}};
  j["Z"] = {{"value", finite_or_null(report.z.value)}, {"standard_error", finite_or_null(report.z.standard_error)}};
  j["excluded"] = report.excluded;
  j["threshold_stops"] = report.threshold_stops;
  j["bridge_splits"] = report.bridge_splits;
  j["forced_absorptions"] = report.forced_absorptions;
  j["max_truncation_error"] = finite_or_null(report.max_truncation_error);
  Json tests = Json::array();
  for (const auto& t : report.tests) {
    tests.push_back({{"observable", t.name},
                     {"statistic", finite_or_null(t.statistic)},
                     {"p", finite_or_null(t.p_value)},
                     {"p_holm", finite_or_null(t.p_holm)}});
  }
  j["tests"] = tests;
  return j;
}

int exit_code(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return kExitPass;
    case Verdict::kFail:
      return kExitFail;
    case Verdict::kInconclusive:
      return kExitInconclusive;
    case Verdict::kUnsupported:
      return kExitUnsupported;
  }
  return kExitConfig;
}

std::vector<double> force_point_locations(const SleParams& p) {
  std::vector<double> xs;
  for (const Side s : {Side::kLeft, Side::kRight}) {
    for (const auto& fp : p.side(s).points) {
      xs.push_back(fp.location);
    }
  }
  return xs;
}

void write_plot(const RunConfig& config, const std::string& name, const std::vector<Complex>& forward,
                const std::vector<Complex>& reversed, const std::vector<Complex>& hatted, const SleParams& hat) {
  auto file = open_output(config, name);
  auto marked = force_point_locations(config.params);
  const auto hatted_marked = force_point_locations(hat);
  marked.insert(marked.end(), hatted_marked.begin(), hatted_marked.end());
  write_svg(file,
            {{forward, "#222222", "forward"}, {reversed, "#1f5fbf", "reversed J-image"}, {hatted, "#c0392b", "hatted"}},
            marked, config.plot_extent, config.digest);
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require_valid(config.params);
  const auto report = verify(verify_config(config));
  auto json_file = open_output(config, "report.json");
  json_file << report_json(config, report).dump(2) << '\n';
  if (report.verdict != Verdict::kUnsupported) {
    auto forward_file = open_output(config, "observables_forward.csv");
    write_observables_csv(forward_file, report.observable_names, report.forward, config.digest);
    auto hatted_file = open_output(config, "observables_hatted.csv");
    write_observables_csv(hatted_file, report.observable_names, report.hatted_ensemble, config.digest);
    std::vector<ComponentRow> components;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      for (const auto& r : report.records[i]) {
        components.push_back({report.hatted_ensemble.streams[i], r});
      }
    }
    auto components_file = open_output(config, "components.csv");
    write_components_csv(components_file, components, config.digest);
    if (config.svg) {
      write_plot(config, "verify.svg", report.example_forward, report.example_reversed, report.example_hatted,
                 report.hatted.base);
    }
  }
  for (const auto& t : report.tests) {
    out << std::left << std::setw(32) << t.name << " D=" << std::setw(12) << t.statistic << " p=" << std::setw(12)
        << t.p_value << " p_holm=" << t.p_holm << '\n';
  }
  out << "ess_forward=" << report.ess_forward << " ess_hatted=" << report.ess_hatted << " Z=" << report.z.value
      << " se=" << report.z.standard_error << '\n';
  out << "verdict=" << to_string(report.verdict) << '\n';
  if (!report.message.empty()) {
    (report.verdict == Verdict::kPass ? out : err) << report.message << '\n';
  }
  return exit_code(report.verdict);
}

int cmd_plot(const RunConfig& config, std::ostream& out, std::ostream&) {
  require_valid(config.params);
  const auto hat = reverse_params(config.params);
  const auto forward = sample_curve(config.params, config.sampler, config.trace, config.seed, forward_stream(0));
  const auto hatted = sample_curve(hat.base, config.sampler, config.trace, config.seed, hatted_stream(0));
  const auto reversed = reverse_curve(forward.trace);
  write_plot(config, "plot.svg", forward.trace.points, reversed.points, hatted.trace.points, hat.base);
  out << "wrote " << (fs::path(config.out_dir) / "plot.svg").string() << '\n';
  return kExitPass;
}

struct Command {
  const char* name;
  const char* help;
  int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
};

constexpr Command kCommands[] = {
    {"validate", "check the force-point configuration (exit 1 on a threshold violation, 3 if malformed)",
     cmd_validate},
    {"reverse-params", "print the parameters and powers of the reversed curve", cmd_reverse_params},
    {"sample", "sample driving paths, one driving_<i>.csv each", cmd_sample},
    {"trace", "sample and trace curves, trace_<i>.csv and chain_<i>.csv", cmd_trace},
    {"weights", "weight factors of sampled curves: components.csv, weights.csv", cmd_weights},
    {"verify", "compare reversed forward curves with weighted reversed-parameter curves", cmd_verify},
    {"plot", "SVG of one forward curve, its reversal and one reversed-parameter curve", cmd_plot},
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chordal SLE_kappa(rho) sampling, conformal weights and time-reversal checks"};
  app.name("slerev");
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("-c,--config", config_path, "flat key=value configuration file");
  std::vector<std::string> assignments;
  app.add_option("--set", assignments, "override a key, key=value (repeatable)");
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<std::string, CLI::Option*>> flag_options;
  for (const auto& key : known_keys()) {
    std::string help = key.help;
    if (!key.default_value.empty()) {
      help += " [" + key.default_value + "]";
    }
    flag_options.emplace_back(key.name, app.add_option("--" + flag_name(key.name), flag_values[key.name], help));
  }
  for (const auto& command : kCommands) {
    app.add_subcommand(command.name, command.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitConfig;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    std::map<std::string, std::string> entries;
    if (!config_path.empty()) {
      entries = read_config_file(config_path);
    }
    for (const auto& assignment : assignments) {
      const auto [key, value] = split_assignment(assignment);
      entries[key] = value;
    }
    for (const auto& [key, option] : flag_options) {
      if (option->count() > 0) {
        entries[key] = flag_values[key];
      }
    }
    const auto config = resolve(entries);
    for (const auto& command : kCommands) {
      if (chosen == command.name) {
        return command.fn(config, out, err);
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParamsError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace slerev::cli
