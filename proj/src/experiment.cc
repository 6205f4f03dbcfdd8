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

#include "fedfreq/experiment.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "fedfreq/errors.h"
#include "fedfreq/hashing.h"
#include "fedfreq/securesum.h"
#include "json.hpp"

namespace fedfreq {
namespace {

constexpr std::uint64_t kRepeatRole = 0x7265706561740010ULL;
constexpr std::uint64_t kSecSumRole = 0x736563730000000bULL;
constexpr std::uint64_t kNoiseSeedRole = 0x64706e000000000cULL;
constexpr std::uint64_t kPilotRole = 0x70696c6f7400000dULL;

// Shortest text that parses back to the same double.
std::string FormatDouble(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string FormatShort(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(
        "config key '" + key + "': expected a number, got '" + value + "'", 0);
  }
}

template <typename T>
T ToInteger(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() ||
      ptr != value.data() + value.size()) {
    throw ParseError(
        "config key '" + key + "': expected an integer, got '" + value + "'",
        0);
  }
  return v;
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw ParseError(
      "config key '" + key + "': expected true/false, got '" + value + "'", 0);
}

std::string JoinGrid(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out += ',';
    out += FormatDouble(grid[i]);
  }
  return out;
}

struct KeyHandler {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using HandlerTable = std::vector<std::pair<std::string, KeyHandler>>;

#define FEDFREQ_STRING_KEY(name)                                     \
  {                                                                  \
    #name, {                                                         \
      [](ExperimentConfig& c, const std::string& v) { c.name = v; }, \
          [](const ExperimentConfig& c) { return c.name; }           \
    }                                                                \
  }
#define FEDFREQ_DOUBLE_KEY(name)                                         \
  {                                                                      \
    #name, {                                                             \
      [](ExperimentConfig& c, const std::string& v) {                    \
        c.name = ToDouble(#name, v);                                     \
      },                                                                 \
          [](const ExperimentConfig& c) { return FormatDouble(c.name); } \
    }                                                                    \
  }
#define FEDFREQ_INT_KEY(name)                                              \
  {                                                                        \
    #name, {                                                               \
      [](ExperimentConfig& c, const std::string& v) {                      \
        c.name = ToInteger<decltype(c.name)>(#name, v);                    \
      },                                                                   \
          [](const ExperimentConfig& c) { return std::to_string(c.name); } \
    }                                                                      \
  }
#define FEDFREQ_BOOL_KEY(name)                             \
  {                                                        \
    #name, {                                               \
      [](ExperimentConfig& c, const std::string& v) {      \
        c.name = ToBool(#name, v);                         \
      },                                                   \
          [](const ExperimentConfig& c) {                  \
            return std::string(c.name ? "true" : "false"); \
          }                                                \
    }                                                      \
  }

const HandlerTable& Handlers() {
  static const HandlerTable* table = new HandlerTable{
      FEDFREQ_STRING_KEY(dataset),
      FEDFREQ_DOUBLE_KEY(zipf_exponent),
      FEDFREQ_STRING_KEY(items_path),
      FEDFREQ_INT_KEY(domain_size),
      FEDFREQ_INT_KEY(total_clients),
      FEDFREQ_INT_KEY(rounds),
      FEDFREQ_BOOL_KEY(homogeneous),
      {"strategy",
       {[](ExperimentConfig& c, const std::string& v) {
          c.strategy = ParseStrategy(v);
        },
        [](const ExperimentConfig& c) {
          return std::string(StrategyName(c.strategy));
        }}},
      FEDFREQ_INT_KEY(rows),
      FEDFREQ_INT_KEY(width),
      {"sizing",
       {[](ExperimentConfig& c, const std::string& v) {
          c.sizing = ParseSizingMode(v);
        },
        [](const ExperimentConfig& c) {
          return std::string(SizingModeName(c.sizing));
        }}},
      {"tau_grid",
       {[](ExperimentConfig& c, const std::string& v) {
          c.tau_grid = v.empty() ? std::vector<double>{} : ParseTauGrid(v);
        },
        [](const ExperimentConfig& c) { return JoinGrid(c.tau_grid); }}},
      FEDFREQ_BOOL_KEY(tau_floor),
      FEDFREQ_DOUBLE_KEY(p),
      FEDFREQ_DOUBLE_KEY(constant),
      FEDFREQ_INT_KEY(seed),
      FEDFREQ_INT_KEY(repeats),
      FEDFREQ_BOOL_KEY(secsum),
      FEDFREQ_INT_KEY(group_bits),
      FEDFREQ_DOUBLE_KEY(dp_epsilon),
      FEDFREQ_DOUBLE_KEY(dp_delta),
      FEDFREQ_DOUBLE_KEY(dp_c0),
      FEDFREQ_INT_KEY(pilot_clients),
      FEDFREQ_INT_KEY(pilot_rows),
      FEDFREQ_INT_KEY(pilot_width),
      FEDFREQ_INT_KEY(k_top),
      FEDFREQ_DOUBLE_KEY(threshold_scale),
      FEDFREQ_STRING_KEY(output),
      FEDFREQ_STRING_KEY(estimates_output),
  };
  return *table;
}

#undef FEDFREQ_STRING_KEY
#undef FEDFREQ_DOUBLE_KEY
#undef FEDFREQ_INT_KEY
#undef FEDFREQ_BOOL_KEY

}  // namespace

std::string_view SizingModeName(SizingMode mode) {
  switch (mode) {
    case SizingMode::kFixed:
      return "fixed";
    case SizingMode::kInstanceOptimal:
      return "instance-optimal";
    case SizingMode::kMinimax:
      return "minimax";
    case SizingMode::kTwoPhase:
      return "two-phase";
  }
  return "unknown";
}

SizingMode ParseSizingMode(std::string_view name) {
  if (name == "fixed") return SizingMode::kFixed;
  if (name == "instance-optimal" || name == "oracle") {
    return SizingMode::kInstanceOptimal;
  }
  if (name == "minimax" || name == "worst-case") return SizingMode::kMinimax;
  if (name == "two-phase") return SizingMode::kTwoPhase;
  throw ArgumentError("unknown sizing mode '" + std::string(name) +
                      "' (expected fixed, instance-optimal, minimax or "
                      "two-phase)");
}

std::optional<PrivacyParams> ExperimentConfig::privacy() const {
  if (!private_mode()) return std::nullopt;
  return PrivacyParams{dp_epsilon, dp_delta, dp_c0};
}

void ExperimentConfig::Set(const std::string& key, const std::string& value) {
  for (const auto& [name, handler] : Handlers()) {
    if (name == key) {
      handler.set(*this, value);
      return;
    }
  }
  throw ArgumentError("unknown config key '" + key + "'");
}

const std::vector<std::string>& ExperimentConfig::Keys() {
  static const std::vector<std::string>* keys = [] {
    auto* k = new std::vector<std::string>;
    for (const auto& entry : Handlers()) k->push_back(entry.first);
    return k;
  }();
  return *keys;
}

std::string ExperimentConfig::Serialize() const {
  std::string out;
  for (const auto& [name, handler] : Handlers()) {
    out += name + " = " + handler.get(*this) + "\n";
  }
  return out;
}

ExperimentConfig ExperimentConfig::Parse(std::istream& in) {
  ExperimentConfig config;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    try {
      config.Set(key, value);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config '" + path + "'");
  return Parse(in);
}

void ExperimentConfig::Validate() const {
  if (dataset != "zipf" && dataset != "file") {
    throw ArgumentError("config: dataset must be 'zipf' or 'file'");
  }
  if (dataset == "zipf") {
    if (!(zipf_exponent > 0.0)) {
      throw ArgumentError("config: zipf_exponent must be positive");
    }
    if (domain_size < 1)
      throw ArgumentError("config: domain_size must be >= 1");
  } else if (items_path.empty()) {
    throw ArgumentError("config: dataset 'file' needs items_path");
  }
  if (domain_size < 0) throw ArgumentError("config: negative domain_size");
  if (rounds < 1) throw ArgumentError("config: rounds must be >= 1");
  if (total_clients < 1 || total_clients % rounds != 0) {
    throw ArgumentError("config: total_clients (" +
                        std::to_string(total_clients) +
                        ") must be a positive multiple of rounds (" +
                        std::to_string(rounds) + ")");
  }
  if (strategy == Strategy::kSingleRound && rounds != 1) {
    throw ArgumentError("config: strategy 'single' needs rounds = 1");
  }
  if (rows < 0) throw ArgumentError("config: rows must be >= 0");
  if (sizing == SizingMode::kFixed) {
    if (width < 1) throw ArgumentError("config: width must be >= 1");
  } else if (tau_grid.empty()) {
    throw ArgumentError("config: sizing '" +
                        std::string(SizingModeName(sizing)) +
                        "' needs a tau_grid");
  }
  for (double tau : tau_grid) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw ArgumentError("config: tau_grid values must lie in (0, 1)");
    }
  }
  if (sizing != SizingMode::kFixed && tau_floor &&
      ApplyTauFloor(tau_grid, total_clients).empty()) {
    throw ArgumentError("config: every tau target is at or below 20 / N");
  }
  if (!(p > 0.0 && p < 1.0))
    throw ArgumentError("config: p must lie in (0, 1)");
  if (!(constant > 0.0)) throw ArgumentError("config: constant must be > 0");
  if (repeats < 1) throw ArgumentError("config: repeats must be >= 1");
  if (group_bits < 0) throw ArgumentError("config: group_bits must be >= 0");
  if (group_bits > 0) GroupParams::WithBits(group_bits, clients_per_round());
  if (dp_epsilon < 0.0) throw ArgumentError("config: dp_epsilon must be >= 0");
  if (private_mode()) privacy()->Validate();
  if (sizing == SizingMode::kTwoPhase) {
    if (pilot_clients < 1 || pilot_clients > total_clients) {
      throw ArgumentError("config: pilot_clients must lie in [1, N]");
    }
    if (pilot_rows < 1 || pilot_width < 1 || k_top < 2) {
      throw ArgumentError("config: invalid pilot sketch or k_top");
    }
  }
  if (!(threshold_scale > 0.0)) {
    throw ArgumentError("config: threshold_scale must be positive");
  }
}

std::vector<double> ParseTauGrid(const std::string& text) {
  std::vector<double> grid;
  const auto parse = [&](std::string_view s) {
    return ToDouble("tau_grid", std::string(Trim(s)));
  };
  if (text.find(':') != std::string::npos) {
    const std::size_t a = text.find(':');
    const std::size_t b = text.find(':', a + 1);
    if (b == std::string::npos) {
      throw ParseError("tau grid range must be lo:hi:count", 0);
    }
    const double lo = parse(std::string_view(text).substr(0, a));
    const double hi = parse(std::string_view(text).substr(a + 1, b - a - 1));
    const int count =
        ToInteger<int>("tau_grid", std::string(Trim(text.substr(b + 1))));
    if (count < 1 || !(hi >= lo)) {
      throw ParseError("tau grid range needs lo <= hi and count >= 1", 0);
    }
    for (int i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return grid;
  }
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    grid.push_back(parse(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return grid;
}

std::vector<double> ApplyTauFloor(const std::vector<double>& taus,
                                  std::int64_t num_clients) {
  const double floor = 20.0 / static_cast<double>(num_clients);
  std::vector<double> kept;
  for (double tau : taus) {
    if (tau > floor) kept.push_back(tau);
  }
  return kept;
}

const std::vector<std::string>& MetricsColumns() {
  static const std::vector<std::string>* columns =
      new std::vector<std::string>{"strategy",   "seed",
                                   "repeat",     "L",
                                   "W",          "tau_target",
                                   "linf_error", "items_over_threshold",
                                   "threshold",  "bits_per_client",
                                   "total_bits", "sigma",
                                   "dp_term",    "bound",
                                   "wall_time"};
  return *columns;
}

void WriteMetricsHeader(std::ostream& out) {
  const auto& cols = MetricsColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) out << ',';
    out << cols[i];
  }
  out << '\n';
}

void WriteMetricsRow(std::ostream& out, const MetricsRow& row,
                     bool include_wall_time) {
  out << StrategyName(row.strategy) << ',' << row.seed << ',' << row.repeat
      << ',' << row.rows << ',' << row.width << ','
      << (row.tau_target ? FormatShort(*row.tau_target) : std::string()) << ','
      << FormatShort(row.linf_error) << ',' << row.items_over_threshold << ','
      << FormatShort(row.threshold) << ',' << row.bits_per_client << ','
      << row.total_bits << ',' << FormatShort(row.sigma) << ','
      << FormatShort(row.dp_term) << ',' << FormatShort(row.bound) << ','
      << (include_wall_time ? FormatShort(row.wall_time) : std::string())
      << '\n';
}

void WriteMetricsCsv(std::ostream& out, const std::vector<MetricsRow>& rows,
                     bool include_wall_time) {
  WriteMetricsHeader(out);
  for (const auto& row : rows) WriteMetricsRow(out, row, include_wall_time);
}

RoundPlan BuildPlan(const ExperimentConfig& config) {
  config.Validate();
  const int rounds = config.rounds;
  const std::int64_t n = config.clients_per_round();
  if (config.dataset == "zipf") {
    if (config.homogeneous) {
      return MakeHomogeneousPlan(
          ZipfFrequencies(config.domain_size, config.zipf_exponent), rounds, n);
    }
    const auto items = GenerateZipf(config.domain_size, config.total_clients,
                                    config.zipf_exponent, config.seed);
    return RoundPlan::FromItems(items, rounds, config.domain_size);
  }
  const std::optional<ItemId> declared =
      config.domain_size > 0 ? std::optional<ItemId>(config.domain_size)
                             : std::nullopt;
  ItemStream stream = LoadItems(config.items_path, declared);
  if (static_cast<std::int64_t>(stream.items.size()) < config.total_clients) {
    throw ArgumentError("item file holds " +
                        std::to_string(stream.items.size()) +
                        " items, fewer than total_clients = " +
                        std::to_string(config.total_clients));
  }
  stream.items.resize(config.total_clients);
  if (config.homogeneous) {
    std::vector<std::int64_t> counts(stream.domain_size, 0);
    for (ItemId item : stream.items) ++counts[item];
    std::vector<double> freqs(counts.begin(), counts.end());
    return MakeHomogeneousPlan(freqs, rounds, n);
  }
  return RoundPlan::FromItems(stream.items, rounds, stream.domain_size);
}

namespace {

std::vector<SketchMatrix> ProduceRoundSketches(
    const RoundPlan& plan, std::span<const HashFamily> families,
    bool per_round_families, bool secsum, const GroupParams& group,
    std::uint64_t seed) {
  std::vector<SketchMatrix> sketches;
  sketches.reserve(plan.num_rounds());
  for (int m = 0; m < plan.num_rounds(); ++m) {
    const HashFamily& family = per_round_families ? families[m] : families[0];
    const int family_round =
        per_round_families || family.mode() == SignMode::kShared ? 0 : m;
    if (secsum) {
      sketches.push_back(SecureRoundAggregate(family, family_round,
                                              plan.rounds[m], group,
                                              DeriveSeed(seed, kSecSumRole)));
    } else {
      sketches.push_back(
          EncodeCounts(family, family_round, RoundHistogram(plan, m)));
    }
  }
  return sketches;
}

std::uint64_t RepeatSeed(std::uint64_t seed, int repeat) {
  return repeat == 0 ? seed : DeriveSeed(seed, kRepeatRole, repeat);
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  return RunExperiment(config, BuildPlan(config));
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const RoundPlan& plan) {
  config.Validate();
  plan.Validate();
  const ItemId d = plan.domain_size;
  const int rounds = plan.num_rounds();
  const std::int64_t n = plan.clients_per_round();
  const std::int64_t total = plan.total_clients();
  if (config.strategy == Strategy::kSingleRound && rounds != 1) {
    throw ArgumentError("strategy 'single' needs a one-round plan");
  }
  const ExactFrequencies exact = ExactOracle(plan);
  const auto sorted_f = SortedDescending(exact.global);
  const HeterogeneityVector het = Heterogeneity(plan);
  const int rows = config.rows > 0 ? config.rows : RowsForDomain(d, config.p);
  const GroupParams group = config.group_bits > 0
                                ? GroupParams::WithBits(config.group_bits, n)
                                : GroupParams::ForClients(n);
  const auto privacy = config.privacy();

  std::vector<std::optional<double>> targets;
  if (config.sizing == SizingMode::kFixed) {
    targets.push_back(std::nullopt);
  } else {
    const auto grid = config.tau_floor ? ApplyTauFloor(config.tau_grid, total)
                                       : config.tau_grid;
    for (double tau : grid) targets.push_back(tau);
  }

  std::optional<FrequencyEstimate> pilot;
  if (config.sizing == SizingMode::kTwoPhase) {
    std::vector<ItemId> clients = plan.Concatenated();
    ShuffleItems(clients, DeriveSeed(config.seed, kPilotRole));
    clients.resize(config.pilot_clients);
    const HashFamily pilot_family(DeriveSeed(config.seed, kPilotRole, 1),
                                  config.pilot_rows, config.pilot_width, d);
    pilot = DecodeSingleRound(EncodeClients(pilot_family, 0, clients),
                              pilot_family, 0);
  }

  ExperimentResult result;
  result.truth = exact.global;
  for (const auto& target : targets) {
    std::int64_t width = config.width;
    if (target) {
      const TargetSpec spec{*target, config.p, config.constant};
      switch (config.sizing) {
        case SizingMode::kInstanceOptimal:
          width = OracleWidth(exact.global, spec, total);
          break;
        case SizingMode::kMinimax:
          width = WorstCaseWidth(spec, total);
          break;
        case SizingMode::kTwoPhase:
          width = TwoPhasePlanFromEstimate(*pilot, config.pilot_clients, spec,
                                           config.k_top, total)
                      .width;
          break;
        case SizingMode::kFixed:
          break;
      }
    }
    if (width > (std::int64_t{1} << 30)) {
      throw ArgumentError("sketch width " + std::to_string(width) +
                          " is too large");
    }
    const int w = static_cast<int>(width);
    for (int r = 0; r < config.repeats; ++r) {
      const std::uint64_t seed = RepeatSeed(config.seed, r);
      const auto start = std::chrono::steady_clock::now();

      std::vector<HashFamily> families;
      const bool fresh = config.strategy == Strategy::kFresh;
      if (fresh) {
        families = MakeFreshFamilies(seed, rows, w, d, rounds);
      } else if (config.strategy == Strategy::kHybrid) {
        families.emplace_back(seed, rows, w, d, rounds, SignMode::kPerRound);
      } else {
        families.emplace_back(seed, rows, w, d, 1, SignMode::kShared);
      }
      const auto sketches = ProduceRoundSketches(plan, families, fresh,
                                                 config.secsum, group, seed);

      MetricsRow row;
      FrequencyEstimate estimate;
      if (privacy) {
        row.sigma = CalibrateSigma(*privacy, rows, n);
        row.dp_term = DpErrorTerm(*privacy, rows, rounds, n);
        std::vector<RealSketch> noisy;
        noisy.reserve(sketches.size());
        const std::uint64_t noise_seed = DeriveSeed(seed, kNoiseSeedRole);
        for (int m = 0; m < rounds; ++m) {
          noisy.push_back(
              PrivatizeRoundSketch(sketches[m], row.sigma, noise_seed, m));
        }
        estimate = fresh ? DecodeFreshReal(noisy, families)
                         : DecodeHybridReal(noisy, families[0]);
      } else if (fresh) {
        estimate = DecodeFresh(sketches, families);
      } else if (config.strategy == Strategy::kHybrid) {
        estimate = DecodeHybrid(sketches, families[0]);
      } else {
        estimate = DecodeShared(sketches, families[0]);
      }
      estimate.strategy = config.strategy;
      const auto stop = std::chrono::steady_clock::now();

      row.strategy = config.strategy;
      row.seed = seed;
      row.repeat = r;
      row.rows = rows;
      row.width = width;
      row.tau_target = target;
      row.linf_error = LinfError(estimate.values, exact.global);
      row.threshold = config.threshold_scale / static_cast<double>(width);
      row.items_over_threshold =
          CountOverThreshold(estimate.values, exact.global, row.threshold);
      row.bits_per_client = CommCostBits(rows, w, group);
      row.total_bits = row.bits_per_client * total;
      const bool uses_f = config.strategy == Strategy::kShared ||
                          config.strategy == Strategy::kSingleRound;
      row.bound = HybridErrorBound(uses_f ? sorted_f : het.sorted, width,
                                   config.constant) +
                  config.constant * row.dp_term;
      row.wall_time = std::chrono::duration<double>(stop - start).count();
      result.rows.push_back(row);
      result.last_estimate = std::move(estimate);
    }
  }
  return result;
}

void WriteEstimatesCsv(std::ostream& out, const FrequencyVector& truth,
                       const FrequencyEstimate& estimate) {
  if (truth.size() != estimate.values.size()) {
    throw ArgumentError("WriteEstimatesCsv: length mismatch");
  }
  out << "item,true_frequency,estimate\n";
  for (std::size_t j = 0; j < truth.size(); ++j) {
    out << j << ',' << FormatShort(truth[j]) << ','
        << FormatShort(estimate.values[j]) << '\n';
  }
}

std::vector<SizingRow> PlanSizing(const ExperimentConfig& config) {
  config.Validate();
  if (config.tau_grid.empty()) {
    throw ArgumentError("plan: a tau grid is required");
  }
  const RoundPlan plan = BuildPlan(config);
  const std::int64_t total = plan.total_clients();
  const ExactFrequencies exact = ExactOracle(plan);
  std::vector<ItemId> clients = plan.Concatenated();
  ShuffleItems(clients, DeriveSeed(config.seed, kPilotRole));
  clients.resize(std::min<std::int64_t>(config.pilot_clients, total));
  const HashFamily pilot_family(DeriveSeed(config.seed, kPilotRole, 1),
                                config.pilot_rows, config.pilot_width,
                                plan.domain_size);
  const FrequencyEstimate pilot = DecodeSingleRound(
      EncodeClients(pilot_family, 0, clients), pilot_family, 0);
  const auto grid = config.tau_floor ? ApplyTauFloor(config.tau_grid, total)
                                     : config.tau_grid;
  std::vector<SizingRow> rows;
  for (double tau : grid) {
    const TargetSpec spec{tau, config.p, config.constant};
    SizingRow row;
    row.tau = tau;
    row.oracle_width = OracleWidth(exact.global, spec, total);
    row.worst_width = WorstCaseWidth(spec, total);
    row.two_phase = TwoPhasePlanFromEstimate(
        pilot, static_cast<std::int64_t>(clients.size()), spec, config.k_top,
        total, exact.global);
    rows.push_back(row);
  }
  return rows;
}

void WriteSizingCsv(std::ostream& out, const std::vector<SizingRow>& rows) {
  out << "tau,W_oracle,W_worst,W_two_phase,L,bits_per_client\n";
  for (const auto& row : rows) {
    out << FormatShort(row.tau) << ',' << row.oracle_width << ','
        << row.worst_width << ',' << row.two_phase.width << ','
        << row.two_phase.rows << ',' << row.two_phase.predicted_bits << '\n';
  }
}

std::string SizingJson(const std::vector<SizingRow>& rows, int indent) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& row : rows) {
    const SizingReport& r = row.two_phase;
    nlohmann::json j;
    j["tau"] = row.tau;
    j["L"] = r.rows;
    j["W"] = r.width;
    j["W_worst"] = row.worst_width;
    j["W_oracle"] = row.oracle_width;
    j["predicted_bits"] = r.predicted_bits;
    j["fell_back"] = r.fell_back;
    if (!r.warning.empty()) j["warning"] = r.warning;
    if (r.fit) {
      j["fit"] = {{"alpha", r.fit->alpha},
                  {"beta", r.fit->beta},
                  {"i_star", r.fit->i_star},
                  {"k_top", r.fit->k_top},
                  {"residual", r.fit->residual}};
    }
    reports.push_back(std::move(j));
  }
  return reports.dump(indent);
}

}  // namespace fedfreq
