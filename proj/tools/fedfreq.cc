//
// Copyright 2026 The FedFreq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// fedfreq: command-line front end for the simulator.
//
//   fedfreq run    --config exp.cfg [--strategy hybrid] [--dp-epsilon 0.5] ...
//   fedfreq sweep  --config exp.cfg --widths 64,128,256 --strategies
//   shared,hybrid fedfreq plan   --config exp.cfg --tau-grid 0.001:0.1:5
//   [--format json] fedfreq config --config exp.cfg --set rounds=10 fedfreq
//   encode --items items.txt --rows 5 --width 256 --out round.sk fedfreq decode
//   --sketch round.sk --domain-size 1000 --seed 7

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedfreq/datasets.h"
#include "fedfreq/errors.h"
#include "fedfreq/experiment.h"
#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"
#include "fedfreq/sketch_io.h"

namespace {

using fedfreq::ExperimentConfig;

// Options shared by the subcommands that take an experiment config.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> assignments;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<int> repeats;
  std::optional<int> group_bits;
  std::optional<double> dp_epsilon;
  std::optional<double> dp_delta;
  std::optional<double> dp_c0;
  std::optional<std::string> tau_grid;
  bool no_secsum = false;
  bool no_tau_floor = false;
};

void AddConfigOptions(CLI::App* app, ConfigOptions& o) {
  app->add_option("-c,--config", o.config_path, "Experiment config file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", o.assignments, "Override a config key (key=value)")
      ->take_all();
  app->add_option("--strategy", o.strategy, "single, shared, fresh or hybrid");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--repeats", o.repeats, "Independent hash seeds per cell");
  app->add_option("--group-bits", o.group_bits,
                  "SecSum modulus bits (checked against the overflow rule)");
  app->add_option("--dp-epsilon", o.dp_epsilon, "Enable DP with this epsilon");
  app->add_option("--dp-delta", o.dp_delta, "DP delta");
  app->add_option("--dp-c0", o.dp_c0, "Noise calibration constant");
  app->add_option("--tau-grid", o.tau_grid, "Targets as a,b,c or lo:hi:count");
  app->add_flag("--no-secsum", o.no_secsum, "Aggregate in the clear");
  app->add_flag("--no-tau-floor", o.no_tau_floor,
                "Keep targets at or below 20 / N");
}

ExperimentConfig BuildConfig(const ConfigOptions& o) {
  ExperimentConfig config = o.config_path.empty()
                                ? ExperimentConfig{}
                                : ExperimentConfig::Load(o.config_path);
  for (const auto& assignment : o.assignments) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw fedfreq::ArgumentError("--set expects key=value, got '" +
                                   assignment + "'");
    }
    config.Set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  if (o.strategy) config.Set("strategy", *o.strategy);
  if (o.seed) config.seed = *o.seed;
  if (o.repeats) config.repeats = *o.repeats;
  if (o.group_bits) config.group_bits = *o.group_bits;
  if (o.dp_epsilon) config.dp_epsilon = *o.dp_epsilon;
  if (o.dp_delta) config.dp_delta = *o.dp_delta;
  if (o.dp_c0) config.dp_c0 = *o.dp_c0;
  if (o.tau_grid) config.Set("tau_grid", *o.tau_grid);
  if (o.no_secsum) config.secsum = false;
  if (o.no_tau_floor) config.tau_floor = false;
  return config;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void Emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw fedfreq::ArgumentError("cannot write '" + path + "'");
  write(out);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    if (end > start) parts.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

int RunCommand(const ConfigOptions& o, std::string output,
               std::string estimates, bool wall_time) {
  ExperimentConfig config = BuildConfig(o);
  if (!output.empty()) config.output = output;
  if (!estimates.empty()) config.estimates_output = estimates;
  const auto result = fedfreq::RunExperiment(config);
  Emit(config.output, [&](std::ostream& out) {
    fedfreq::WriteMetricsCsv(out, result.rows, wall_time);
  });
  if (!config.estimates_output.empty()) {
    Emit(config.estimates_output, [&](std::ostream& out) {
      fedfreq::WriteEstimatesCsv(out, result.truth, result.last_estimate);
    });
  }
  return 0;
}

int SweepCommand(const ConfigOptions& o, const std::string& widths,
                 const std::string& strategies, const std::string& output,
                 bool wall_time) {
  ExperimentConfig config = BuildConfig(o);
  if (!output.empty()) config.output = output;
  std::vector<std::string> strategy_names =
      strategies.empty() ? std::vector<std::string>{std::string(
                               fedfreq::StrategyName(config.strategy))}
                         : SplitList(strategies);
  std::vector<std::int64_t> width_list;
  for (const auto& w : SplitList(widths)) width_list.push_back(std::stoll(w));
  if (width_list.empty() && config.sizing == fedfreq::SizingMode::kFixed) {
    if (config.tau_grid.empty())
      width_list.push_back(config.width);
    else
      config.sizing = fedfreq::SizingMode::kInstanceOptimal;
  }
  // Validate every cell before running any of them.
  std::vector<ExperimentConfig> cells;
  for (const auto& name : strategy_names) {
    ExperimentConfig cell = config;
    cell.strategy = fedfreq::ParseStrategy(name);
    if (width_list.empty()) {
      cell.Validate();
      cells.push_back(cell);
      continue;
    }
    for (std::int64_t w : width_list) {
      cell.sizing = fedfreq::SizingMode::kFixed;
      cell.width = w;
      cell.Validate();
      cells.push_back(cell);
    }
  }
  const fedfreq::RoundPlan plan = fedfreq::BuildPlan(config);
  Emit(config.output, [&](std::ostream& out) {
    fedfreq::WriteMetricsHeader(out);
    for (const auto& cell : cells) {
      for (const auto& row : fedfreq::RunExperiment(cell, plan).rows) {
        fedfreq::WriteMetricsRow(out, row, wall_time);
      }
    }
  });
  return 0;
}

int PlanCommand(const ConfigOptions& o, const std::string& format,
                const std::string& output) {
  const ExperimentConfig config = BuildConfig(o);
  const auto rows = fedfreq::PlanSizing(config);
  Emit(output, [&](std::ostream& out) {
    if (format == "csv") {
      fedfreq::WriteSizingCsv(out, rows);
    } else {
      out << fedfreq::SizingJson(rows) << '\n';
    }
  });
  return 0;
}

struct SketchOptions {
  std::string items_path;
  std::string sketch_path;
  std::string output;
  std::uint64_t seed = 1;
  int rows = 5;
  int width = 256;
  int round = 0;
  int rounds = 1;
  std::int64_t domain_size = 0;
  bool per_round_signs = false;
};

fedfreq::HashFamily SketchFamily(const SketchOptions& o,
                                 fedfreq::ItemId domain_size) {
  return fedfreq::HashFamily(o.seed, o.rows, o.width, domain_size,
                             o.per_round_signs ? o.rounds : 1,
                             o.per_round_signs ? fedfreq::SignMode::kPerRound
                                               : fedfreq::SignMode::kShared);
}

int EncodeCommand(const SketchOptions& o) {
  const auto stream = fedfreq::LoadItems(
      o.items_path, o.domain_size > 0
                        ? std::optional<fedfreq::ItemId>(o.domain_size)
                        : std::nullopt);
  const auto family = SketchFamily(o, stream.domain_size);
  const auto sketch = fedfreq::EncodeClients(
      family, o.per_round_signs ? o.round : 0, stream.items);
  fedfreq::SaveSketch(o.output, sketch);
  std::cerr << "encoded " << stream.items.size()
            << " clients, d=" << stream.domain_size << "\n";
  return 0;
}

int DecodeCommand(const SketchOptions& o) {
  if (o.domain_size < 1) {
    throw fedfreq::ArgumentError("decode needs --domain-size");
  }
  const auto sketch = fedfreq::LoadSketch(o.sketch_path);
  SketchOptions shaped = o;
  shaped.rows = sketch.rows();
  shaped.width = sketch.width();
  shaped.seed = sketch.seed();
  const auto family = SketchFamily(shaped, o.domain_size);
  const auto estimate = fedfreq::DecodeSingleRound(
      sketch, family, o.per_round_signs ? o.round : 0);
  Emit(o.output, [&](std::ostream& out) {
    out << "item,estimate\n";
    for (std::size_t j = 0; j < estimate.values.size(); ++j) {
      out << j << ',' << estimate.values[j] << '\n';
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated frequency estimation simulator"};
  app.require_subcommand(1);

  ConfigOptions run_opts;
  std::string run_output;
  std::string run_estimates;
  bool no_wall_time = false;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  AddConfigOptions(run, run_opts);
  run->add_option("-o,--output", run_output, "Metrics CSV (default stdout)");
  run->add_option("--estimates", run_estimates, "Per-item estimate CSV");
  run->add_flag("--no-wall-time", no_wall_time,
                "Leave wall_time empty for byte-stable output");

  ConfigOptions sweep_opts;
  std::string sweep_widths;
  std::string sweep_strategies;
  std::string sweep_output;
  auto* sweep = app.add_subcommand("sweep", "Sweep strategies and widths");
  AddConfigOptions(sweep, sweep_opts);
  sweep->add_option("--widths", sweep_widths, "Fixed widths, comma separated");
  sweep->add_option("--strategies", sweep_strategies,
                    "Strategies, comma separated");
  sweep->add_option("-o,--output", sweep_output,
                    "Metrics CSV (default stdout)");
  sweep->add_flag("--no-wall-time", no_wall_time,
                  "Leave wall_time empty for byte-stable output");

  ConfigOptions plan_opts;
  std::string plan_format = "json";
  std::string plan_output;
  auto* plan = app.add_subcommand("plan", "Sketch sizing report per tau");
  AddConfigOptions(plan, plan_opts);
  plan->add_option("--format", plan_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  plan->add_option("-o,--output", plan_output, "Report file (default stdout)");

  ConfigOptions show_opts;
  auto* show = app.add_subcommand("config", "Print the resolved config");
  AddConfigOptions(show, show_opts);

  SketchOptions encode_opts;
  auto* encode = app.add_subcommand("encode", "Sketch an item file");
  encode->add_option("--items", encode_opts.items_path, "Item file")
      ->required()
      ->check(CLI::ExistingFile);
  encode
      ->add_option("-o,--out", encode_opts.output,
                   "Sketch file (.csv for text, binary otherwise)")
      ->required();
  SketchOptions decode_opts;
  auto* decode = app.add_subcommand("decode", "Decode a sketch file");
  decode->add_option("--sketch", decode_opts.sketch_path, "Sketch file")
      ->required()
      ->check(CLI::ExistingFile);
  decode->add_option("-o,--output", decode_opts.output,
                     "Estimate CSV (default stdout)");
  for (auto [cmd, o] :
       {std::pair{encode, &encode_opts}, std::pair{decode, &decode_opts}}) {
    cmd->add_option("--seed", o->seed, "Hash seed");
    cmd->add_option("--rows", o->rows, "Sketch rows L");
    cmd->add_option("--width", o->width, "Sketch width W");
    cmd->add_option("--domain-size", o->domain_size, "Domain size d");
    cmd->add_option("--round", o->round, "Round index for per-round signs");
    cmd->add_option("--rounds", o->rounds, "Number of rounds M");
    cmd->add_flag("--per-round-signs", o->per_round_signs,
                  "Hybrid family (signs depend on the round)");
  }

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run)
      return RunCommand(run_opts, run_output, run_estimates, !no_wall_time);
    if (*sweep) {
      return SweepCommand(sweep_opts, sweep_widths, sweep_strategies,
                          sweep_output, !no_wall_time);
    }
    if (*plan) return PlanCommand(plan_opts, plan_format, plan_output);
    if (*show) {
      const auto config = BuildConfig(show_opts);
      config.Validate();
      std::cout << config.Serialize();
      return 0;
    }
    if (*encode) return EncodeCommand(encode_opts);
    if (*decode) return DecodeCommand(decode_opts);
  } catch (const fedfreq::Error& e) {
    std::cerr << "fedfreq: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
