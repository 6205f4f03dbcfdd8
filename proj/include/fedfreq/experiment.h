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

#ifndef FEDFREQ_EXPERIMENT_H_
#define FEDFREQ_EXPERIMENT_H_

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedfreq/datasets.h"
#include "fedfreq/multiround.h"
#include "fedfreq/privacy.h"
#include "fedfreq/sizing.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

enum class SizingMode { kFixed, kInstanceOptimal, kMinimax, kTwoPhase };

std::string_view SizingModeName(SizingMode mode);
SizingMode ParseSizingMode(std::string_view name);

// One experiment. Stored as flat "key = value" text; see Keys() for the
// accepted keys and Serialize() for the canonical form.
struct ExperimentConfig {
  std::string dataset = "zipf";  // "zipf" or "file"
  double zipf_exponent = 2.0;
  std::string items_path;
  ItemId domain_size = 10000;  // 0 infers it from the item file
  std::int64_t total_clients = 10000;
  int rounds = 1;
  bool homogeneous = false;
  Strategy strategy = Strategy::kHybrid;
  int rows = 0;  // 0 selects ceil(ln(d / p))
  std::int64_t width = 256;
  SizingMode sizing = SizingMode::kFixed;
  std::vector<double> tau_grid;
  bool tau_floor = true;
  double p = 0.1;
  double constant = 2.0;
  std::uint64_t seed = 1;
  int repeats = 1;
  bool secsum = true;
  int group_bits = 0;       // 0 picks the smallest valid group
  double dp_epsilon = 0.0;  // 0 disables the Gaussian mechanism
  double dp_delta = 1e-6;
  double dp_c0 = std::sqrt(2.0);
  std::int64_t pilot_clients = 5000;
  int pilot_rows = 16;
  int pilot_width = 100;
  int k_top = 20;
  double threshold_scale = 0.1;
  std::string output;
  std::string estimates_output;

  std::int64_t clients_per_round() const { return total_clients / rounds; }
  bool private_mode() const { return dp_epsilon > 0.0; }
  std::optional<PrivacyParams> privacy() const;

  // Sets one key from its text form. Throws ArgumentError for unknown keys
  // and ParseError for malformed values.
  void Set(const std::string& key, const std::string& value);

  // Throws ArgumentError (or OutOfRegimeError for privacy parameters) before
  // any work is done.
  void Validate() const;

  std::string Serialize() const;
  static ExperimentConfig Parse(std::istream& in);
  static ExperimentConfig Load(const std::string& path);

  static const std::vector<std::string>& Keys();
};

// Parses "0.01,0.02,0.05" or "lo:hi:count" (count evenly spaced values,
// endpoints included).
std::vector<double> ParseTauGrid(const std::string& text);

// Drops targets at or below 20 / num_clients.
std::vector<double> ApplyTauFloor(const std::vector<double>& taus,
                                  std::int64_t num_clients);

struct MetricsRow {
  Strategy strategy = Strategy::kHybrid;
  std::uint64_t seed = 0;
  int repeat = 0;
  int rows = 0;
  std::int64_t width = 0;
  std::optional<double> tau_target;
  double linf_error = 0.0;
  ItemId items_over_threshold = 0;
  double threshold = 0.0;
  std::int64_t bits_per_client = 0;
  std::int64_t total_bits = 0;
  double sigma = 0.0;
  double dp_term = 0.0;
  double bound = 0.0;
  double wall_time = 0.0;
};

// Fixed column order of the metrics CSV.
const std::vector<std::string>& MetricsColumns();
void WriteMetricsHeader(std::ostream& out);
void WriteMetricsRow(std::ostream& out, const MetricsRow& row,
                     bool include_wall_time = true);
void WriteMetricsCsv(std::ostream& out, const std::vector<MetricsRow>& rows,
                     bool include_wall_time = true);

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  FrequencyVector truth;
  FrequencyEstimate last_estimate;
};

// Builds the round plan described by the config (synthetic or file based).
RoundPlan BuildPlan(const ExperimentConfig& config);

// plan -> optional secure summation -> strategy -> optional Gaussian noise ->
// metrics against the exact oracle, for every tau target and repeat.
// Deterministic in the config apart from wall_time.
ExperimentResult RunExperiment(const ExperimentConfig& config);
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const RoundPlan& plan);

// Writes item,true_frequency,estimate rows.
void WriteEstimatesCsv(std::ostream& out, const FrequencyVector& truth,
                       const FrequencyEstimate& estimate);

// Per-tau widths under the three sizing rules, for the plan of `config`.
struct SizingRow {
  double tau = 0.0;
  std::int64_t oracle_width = 0;
  std::int64_t worst_width = 0;
  SizingReport two_phase;
};

std::vector<SizingRow> PlanSizing(const ExperimentConfig& config);
void WriteSizingCsv(std::ostream& out, const std::vector<SizingRow>& rows);
std::string SizingJson(const std::vector<SizingRow>& rows, int indent = 2);

}  // namespace fedfreq

#endif  // FEDFREQ_EXPERIMENT_H_
