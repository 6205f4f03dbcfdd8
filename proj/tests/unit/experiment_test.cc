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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fedfreq/errors.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace fedfreq {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.domain_size = 500;
  c.total_clients = 3000;
  c.rounds = 3;
  c.rows = 5;
  c.width = 64;
  c.seed = 5;
  c.repeats = 2;
  return c;
}

std::string MetricsText(const ExperimentResult& result) {
  std::ostringstream out;
  WriteMetricsCsv(out, result.rows, /*include_wall_time=*/false);
  return out.str();
}

TEST(ConfigTest, RoundTrip) {
  ExperimentConfig c = SmallConfig();
  c.strategy = Strategy::kFresh;
  c.sizing = SizingMode::kTwoPhase;
  c.tau_grid = {0.01, 0.1 / 3};
  c.dp_epsilon = 0.25;
  c.dp_c0 = 1.2345678901234567;
  c.zipf_exponent = 1.1;
  c.items_path = "data/items.txt";
  c.secsum = false;
  c.seed = 18446744073709551615ULL;
  std::istringstream in(c.Serialize());
  const ExperimentConfig back = ExperimentConfig::Parse(in);
  EXPECT_EQ(back.Serialize(), c.Serialize());
  EXPECT_EQ(back.tau_grid, c.tau_grid);
  EXPECT_EQ(back.dp_c0, c.dp_c0);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.strategy, Strategy::kFresh);
  EXPECT_EQ(back.sizing, SizingMode::kTwoPhase);
  EXPECT_FALSE(back.secsum);
}

TEST(ConfigTest, EveryKeyIsSerialized) {
  const std::string text = ExperimentConfig{}.Serialize();
  for (const auto& key : ExperimentConfig::Keys()) {
    EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
  }
}

TEST(ConfigTest, ParseErrorsCarryLineNumbers) {
  std::istringstream unknown("rounds = 2\nwidht = 3\n");
  try {
    ExperimentConfig::Parse(unknown);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::istringstream bad_value("# comment\n\nwidth = wide\n");
  try {
    ExperimentConfig::Parse(bad_value);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream no_equals("width 3\n");
  EXPECT_THROW(ExperimentConfig::Parse(no_equals), ParseError);
}

TEST(ConfigTest, Validation) {
  ExperimentConfig c = SmallConfig();
  EXPECT_NO_THROW(c.Validate());
  c.total_clients = 3001;
  EXPECT_THROW(c.Validate(), ArgumentError);
  c = SmallConfig();
  c.strategy = Strategy::kSingleRound;
  EXPECT_THROW(c.Validate(), ArgumentError);
  c = SmallConfig();
  c.dp_epsilon = 1.5;
  EXPECT_THROW(c.Validate(), OutOfRegimeError);
  c = SmallConfig();
  c.group_bits = 4;
  EXPECT_THROW(c.Validate(), OverflowError);
  c = SmallConfig();
  c.sizing = SizingMode::kMinimax;
  EXPECT_THROW(c.Validate(), ArgumentError);
  c.tau_grid = {0.001};  // at or below 20 / N
  EXPECT_THROW(c.Validate(), ArgumentError);
  c.tau_floor = false;
  EXPECT_NO_THROW(c.Validate());
  c.tau_grid = {1.5};
  EXPECT_THROW(c.Validate(), ArgumentError);
}

TEST(TauGridTest, ListsAndRanges) {
  EXPECT_EQ(ParseTauGrid("0.1,0.2"), (std::vector<double>{0.1, 0.2}));
  const auto range = ParseTauGrid("0.01:0.05:5");
  ASSERT_EQ(range.size(), 5u);
  EXPECT_DOUBLE_EQ(range.front(), 0.01);
  EXPECT_DOUBLE_EQ(range[2], 0.03);
  EXPECT_DOUBLE_EQ(range.back(), 0.05);
  EXPECT_THROW(ParseTauGrid("0.1:0.2"), ParseError);
  EXPECT_THROW(ParseTauGrid("0.1,x"), ParseError);
}

TEST(TauGridTest, FloorDropsSmallTargets) {
  EXPECT_EQ(ApplyTauFloor({0.001, 0.002, 0.01}, 10000),
            (std::vector<double>{0.01}));
}

TEST(RunExperimentTest, DeterministicOutput) {
  const ExperimentConfig c = SmallConfig();
  EXPECT_EQ(MetricsText(RunExperiment(c)), MetricsText(RunExperiment(c)));
}

TEST(RunExperimentTest, SecureSumMatchesPlaintext) {
  ExperimentConfig c = SmallConfig();
  for (auto strategy :
       {Strategy::kShared, Strategy::kFresh, Strategy::kHybrid}) {
    c.strategy = strategy;
    c.secsum = true;
    const auto masked = RunExperiment(c);
    c.secsum = false;
    const auto clear = RunExperiment(c);
    EXPECT_EQ(MetricsText(masked), MetricsText(clear));
    EXPECT_EQ(masked.last_estimate.values, clear.last_estimate.values);
  }
}

TEST(RunExperimentTest, SharedMatchesSingleRoundConcatenation) {
  ExperimentConfig multi = SmallConfig();
  multi.strategy = Strategy::kShared;
  ExperimentConfig single = multi;
  single.strategy = Strategy::kSingleRound;
  single.rounds = 1;
  // Same clients in the same order: the dataset depends only on the seed.
  const auto a = RunExperiment(multi);
  const auto b = RunExperiment(single);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].linf_error, b.rows[i].linf_error);
  }
}

TEST(RunExperimentTest, MetricsSanity) {
  ExperimentConfig c = SmallConfig();
  c.dp_epsilon = 0.5;
  const auto result = RunExperiment(c);
  ASSERT_EQ(result.rows.size(), 2u);
  for (const auto& row : result.rows) {
    EXPECT_GE(row.linf_error, 0.0);
    EXPECT_LE(row.items_over_threshold, c.domain_size);
    EXPECT_DOUBLE_EQ(row.threshold, 0.1 / 64);
    EXPECT_GT(row.sigma, 0.0);
    EXPECT_GT(row.dp_term, 0.0);
    EXPECT_EQ(row.bits_per_client, 5 * 64 * 11);  // q = 2048 >= 2 * 1000 + 2
    EXPECT_EQ(row.total_bits, row.bits_per_client * 3000);
  }
  EXPECT_NE(result.rows[0].seed, result.rows[1].seed);
  EXPECT_EQ(result.last_estimate.domain_size(), 500);
}

TEST(RunExperimentTest, SizingModes) {
  ExperimentConfig c = SmallConfig();
  c.repeats = 1;
  c.tau_grid = {0.02, 0.05};
  c.pilot_clients = 1000;
  for (auto mode : {SizingMode::kInstanceOptimal, SizingMode::kMinimax,
                    SizingMode::kTwoPhase}) {
    c.sizing = mode;
    const auto result = RunExperiment(c);
    ASSERT_EQ(result.rows.size(), 2u);
    EXPECT_EQ(*result.rows[0].tau_target, 0.02);
    EXPECT_GE(result.rows[0].width, result.rows[1].width);
  }
  c.sizing = SizingMode::kMinimax;
  EXPECT_EQ(RunExperiment(c).rows[0].width, 2 * 100);  // 2 * min(2/0.02, n)
}

TEST(MetricsCsvTest, ColumnOrder) {
  std::ostringstream out;
  WriteMetricsHeader(out);
  EXPECT_EQ(
      out.str(),
      "strategy,seed,repeat,L,W,tau_target,linf_error,items_over_threshold,"
      "threshold,bits_per_client,total_bits,sigma,dp_term,bound,wall_time\n");
}

TEST(EstimatesCsvTest, OneLinePerItem) {
  const auto result = RunExperiment(SmallConfig());
  std::ostringstream out;
  WriteEstimatesCsv(out, result.truth, result.last_estimate);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 501);
  EXPECT_EQ(text.rfind("item,true_frequency,estimate\n", 0), 0u);
}

TEST(PlanSizingTest, JsonAndCsv) {
  ExperimentConfig c = SmallConfig();
  c.total_clients = 30000;
  c.domain_size = 2000;
  c.tau_grid = {0.005, 0.02, 0.08};
  const auto rows = PlanSizing(c);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_LE(row.two_phase.width, row.worst_width);
    EXPECT_EQ(*row.two_phase.oracle_width, row.oracle_width);
  }
  const auto json = nlohmann::json::parse(SizingJson(rows));
  ASSERT_EQ(json.size(), 3u);
  EXPECT_EQ(json[1]["W_worst"].get<std::int64_t>(), rows[1].worst_width);
  EXPECT_TRUE(json[0].contains("fit"));
  std::ostringstream csv;
  WriteSizingCsv(csv, rows);
  EXPECT_EQ(csv.str().rfind(
                "tau,W_oracle,W_worst,W_two_phase,L,bits_per_client\n", 0),
            0u);
}

TEST(BuildPlanTest, FileDataset) {
  const auto path =
      (std::filesystem::temp_directory_path() / "fedfreq_items.txt").string();
  {
    std::ofstream out(path);
    out << "0\n1,3\n2\n2\n";
  }
  ExperimentConfig c;
  c.dataset = "file";
  c.items_path = path;
  c.domain_size = 0;
  c.total_clients = 6;
  c.rounds = 2;
  const RoundPlan plan = BuildPlan(c);
  EXPECT_EQ(plan.domain_size, 3);
  EXPECT_EQ(plan.rounds[0], (std::vector<ItemId>{0, 1, 1}));
  c.total_clients = 8;
  EXPECT_THROW(BuildPlan(c), ArgumentError);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace fedfreq
