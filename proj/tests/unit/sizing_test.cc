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

#include "fedfreq/sizing.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "fedfreq/datasets.h"
#include "fedfreq/errors.h"
#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"
#include "gtest/gtest.h"

namespace fedfreq {
namespace {

std::vector<double> RandomSimplex(std::mt19937_64& rng, ItemId d) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> f(d);
  for (auto& v : f) v = std::pow(expo(rng), 3.0);
  const double sum = std::accumulate(f.begin(), f.end(), 0.0);
  for (auto& v : f) v /= sum;
  return f;
}

TEST(RowsTest, NaturalLogCeiling) {
  EXPECT_EQ(RowsForDomain(10000, 0.1), 12);   // ln(1e5) = 11.51
  EXPECT_EQ(RowsForDomain(175000, 0.1), 15);  // ln(1.75e6) = 14.38
  EXPECT_EQ(RowsForDomain(1, 0.9), 1);
}

TEST(TailErrorTest, OneHotHasNoTail) {
  std::vector<double> f(10, 0.0);
  f[0] = 1.0;
  for (std::int64_t w = 1; w <= 12; ++w) EXPECT_EQ(TailError(f, w), 0.0);
}

TEST(TailErrorTest, Uniform) {
  const std::vector<double> f(100, 0.01);
  EXPECT_NEAR(TailError(f, 50), 0.01, 1e-15);
}

TEST(TailErrorTest, RejectsUnsortedOrZeroWidth) {
  EXPECT_THROW(TailError(std::vector<double>{0.2, 0.8}, 1), ArgumentError);
  EXPECT_THROW(TailError(std::vector<double>{0.8, 0.2}, 0), ArgumentError);
}

TEST(TailErrorTest, MonotoneAndBelowInverseWidth) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = SortedDescending(RandomSimplex(rng, 1 + rng() % 300));
    double previous = INFINITY;
    for (std::int64_t w = 1; w <= static_cast<std::int64_t>(f.size()) + 2;
         ++w) {
      const double e = TailError(f, w);
      EXPECT_LE(e, previous);
      EXPECT_LE(e, 1.0 / w);
      previous = e;
    }
  }
}

TEST(OracleWidthTest, Examples) {
  std::vector<double> one_hot(50, 0.0);
  one_hot[0] = 1.0;
  EXPECT_EQ(OracleWidth(one_hot, TargetSpec{0.1, 0.1, 2.0}, 100), 2);
  // f_i = 10/n on n/10 items with n = 1000, tau = 0.05: no head and a tail
  // term of (1/tau^2) * 100 * 0.01^2 = 4.
  std::vector<double> flat(1000, 0.0);
  std::fill(flat.begin(), flat.begin() + 100, 0.01);
  EXPECT_NEAR(HeadTailWidth(flat, 0.05), 4.0, 1e-12);
  EXPECT_EQ(OracleWidth(flat, TargetSpec{0.05, 0.1, 2.0}, 1000), 8);
  // Brute force: the smallest W with E(W) <= tau sits in [W/(2C), W].
  const auto sorted = SortedDescending(flat);
  const auto minimal = MinimalWidth(sorted, 0.05);
  EXPECT_EQ(minimal, 4);
  EXPECT_LE(minimal, 8);
  EXPECT_GE(minimal, 8 / 4);
}

TEST(OracleWidthTest, CappedByClients) {
  const auto f = ZipfFrequencies(1000, 0.5);
  EXPECT_EQ(OracleWidth(f, TargetSpec{1e-4, 0.1, 2.0}, 37), 74);
}

TEST(OracleWidthTest, ZipfTwoNearInverseSquareRoot) {
  const auto f = ZipfFrequencies(100000, 2.0);
  const auto w = OracleWidth(f, TargetSpec{0.01, 0.1, 2.0}, 1 << 30);
  EXPECT_GE(w, 10 / 4);
  EXPECT_LE(w, 10 * 4);
}

TEST(OracleWidthTest, BracketsBruteForceMinimum) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = RandomSimplex(rng, 1 + rng() % 500);
    const auto sorted = SortedDescending(f);
    for (double tau : {0.002, 0.01, 0.05, 0.2}) {
      const TargetSpec spec{tau, 0.1, 2.0};
      const auto oracle = OracleWidth(f, spec, 1 << 30);
      const auto minimal = MinimalWidth(sorted, tau);
      EXPECT_LE(minimal, oracle);
      EXPECT_GE(static_cast<double>(minimal), oracle / (2 * spec.constant) - 1);
    }
  }
}

TEST(OracleWidthTest, NonIncreasingInTau) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = RandomSimplex(rng, 1 + rng() % 400);
    std::int64_t previous = INT64_MAX;
    for (double tau = 0.0005; tau < 0.9; tau *= 1.3) {
      const auto w = OracleWidth(f, TargetSpec{tau, 0.1, 2.0}, 100000);
      EXPECT_LE(w, previous);
      previous = w;
    }
  }
}

TEST(WorstCaseWidthTest, Examples) {
  EXPECT_EQ(WorstCaseWidth(TargetSpec{0.01, 0.1, 2.0}, 1000000), 400);
  EXPECT_EQ(WorstCaseWidth(TargetSpec{0.5, 0.1, 2.0}, 2), 4);
}

TEST(WorstCaseWidthTest, DominatesOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = RandomSimplex(rng, 1 + rng() % 1000);
    const double tau = std::pow(10.0, -3.0 + 2.5 * (rng() % 1000) / 1000.0);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100000);
    const TargetSpec spec{tau, 0.1, 2.0};
    EXPECT_GE(WorstCaseWidth(spec, n), OracleWidth(f, spec, n));
  }
}

TEST(TargetSpecTest, Validation) {
  EXPECT_THROW((TargetSpec{0.0, 0.1, 2.0}.Validate()), ArgumentError);
  EXPECT_THROW((TargetSpec{1.0, 0.1, 2.0}.Validate()), ArgumentError);
  EXPECT_THROW((TargetSpec{0.1, 1.0, 2.0}.Validate()), ArgumentError);
  EXPECT_THROW((TargetSpec{0.1, 0.1, 0.0}.Validate()), ArgumentError);
  EXPECT_NO_THROW((TargetSpec{0.1, 0.1, 2.0}.Validate()));
}

TEST(FitPowerLawTest, NoiselessRecovery) {
  std::vector<double> f(100);
  for (int i = 0; i < 100; ++i) f[i] = 0.3 * std::pow(i + 1.0, -1.5);
  const PowerLawFit fit = FitPowerLaw(f, 20);
  EXPECT_NEAR(fit.alpha, 1.5, 1e-9);
  EXPECT_NEAR(fit.beta, 0.3, 1e-9);
  EXPECT_EQ(fit.k_top, 20);
  EXPECT_NEAR(fit.residual, 0.0, 1e-18);
  EXPECT_EQ(fit.i_star, TruncationIndex(1.5, 0.3, 100));
}

TEST(FitPowerLawTest, UsesTheLargestValuesInAnyOrder) {
  std::vector<double> f(50);
  for (int i = 0; i < 50; ++i) f[i] = 0.2 * std::pow(i + 1.0, -2.0);
  std::mt19937_64 rng(5);
  std::shuffle(f.begin(), f.end(), rng);
  EXPECT_NEAR(FitPowerLaw(f, 10).alpha, 2.0, 1e-9);
}

TEST(FitPowerLawTest, FlatInputFails) {
  const std::vector<double> flat(30, 0.01);
  EXPECT_THROW(FitPowerLaw(flat, 20), FitError);
  EXPECT_THROW(FitPowerLaw(std::vector<double>{0.5, 0.0, 0.0}, 20), FitError);
  EXPECT_THROW(FitPowerLaw(flat, 1), ArgumentError);
}

TEST(FitPowerLawTest, NegativeEstimatesAreClamped) {
  std::vector<double> f = {0.5, 0.1, -0.01, 0.0};
  // Without a floor the negative value is dropped; zero always is.
  const PowerLawFit dropped = FitPowerLaw(f, 4);
  EXPECT_NEAR(dropped.alpha, std::log(5.0) / std::log(2.0), 1e-12);
  const PowerLawFit clamped = FitPowerLaw(f, 4, 0.001);
  EXPECT_GT(clamped.alpha, dropped.alpha);
}

TEST(TruncationIndexTest, Definition) {
  for (double alpha : {1.1, 1.5, 2.0, 3.0}) {
    for (double beta : {0.2, 0.5, 0.7, 0.9}) {
      const auto i_star = TruncationIndex(alpha, beta, 100000);
      double sum = 0.0;
      std::int64_t expected = 0;
      for (std::int64_t i = 1; i <= 100000; ++i) {
        sum += beta * std::pow(static_cast<double>(i), -alpha);
        if (sum > 1.0) break;
        expected = i;
      }
      EXPECT_EQ(i_star, expected) << alpha << " " << beta;
    }
  }
}

TEST(PowerLawModelTest, TruncatesAtIStar) {
  const PowerLawFit fit{2.0, 0.7, TruncationIndex(2.0, 0.7, 1000), 20, 0.0};
  const auto model = PowerLawModel(fit, 1000);
  ASSERT_EQ(model.size(), 1000u);
  EXPECT_DOUBLE_EQ(model[0], 0.7);
  EXPECT_GT(model[fit.i_star - 1], 0.0);
  if (fit.i_star < 1000) EXPECT_EQ(model[fit.i_star], 0.0);
  EXPECT_LE(std::accumulate(model.begin(), model.end(), 0.0), 1.0);
}

TEST(TwoPhaseTest, PilotRecoversZipfExponent) {
  const ItemId d = 10000;
  int inside = 0;
  for (int s = 0; s < 100; ++s) {
    const auto items = GenerateZipf(d, 5000, 2.0, 900 + s);
    const HashFamily family(s, 16, 100, d);
    const auto pilot =
        DecodeSingleRound(EncodeClients(family, 0, items), family);
    const auto fit = FitPowerLaw(pilot, 20, 1.0 / 10000);
    inside += fit.alpha >= 1.6 && fit.alpha <= 2.4;
  }
  EXPECT_GE(inside, 95);
}

TEST(TwoPhaseTest, ReportFields) {
  const ItemId d = 5000;
  const auto items = GenerateZipf(d, 5000, 1.5, 1);
  const auto truth = ZipfFrequencies(d, 1.5);
  const TargetSpec spec{0.01, 0.1, 2.0};
  const SizingReport report =
      TwoPhasePlan(items, d, spec, PilotConfig{}, 100000, 7, truth);
  EXPECT_EQ(report.rows, RowsForDomain(d, 0.1));
  EXPECT_EQ(report.worst_width, WorstCaseWidth(spec, 100000));
  ASSERT_TRUE(report.oracle_width.has_value());
  EXPECT_EQ(*report.oracle_width, OracleWidth(truth, spec, 100000));
  ASSERT_TRUE(report.fit.has_value());
  EXPECT_FALSE(report.fell_back);
  EXPECT_LE(report.width, report.worst_width);
  EXPECT_GE(report.width, 1);
  EXPECT_GT(report.predicted_bits, 0);
}

TEST(TwoPhaseTest, LooseTargetGivesSmallWidth) {
  const ItemId d = 1000;
  const auto items = GenerateZipf(d, 2000, 2.0, 3);
  const SizingReport report = TwoPhasePlan(items, d, TargetSpec{0.95, 0.1, 2.0},
                                           PilotConfig{}, 1000, 2);
  EXPECT_GE(report.width, 1);
  EXPECT_LE(report.width, 4);
}

TEST(TwoPhaseTest, FlatPilotFallsBackToWorstCase) {
  FrequencyEstimate flat;
  flat.values.assign(200, 0.005);
  const TargetSpec spec{0.01, 0.1, 2.0};
  const SizingReport report =
      TwoPhasePlanFromEstimate(flat, 1000, spec, 20, 5000);
  EXPECT_TRUE(report.fell_back);
  EXPECT_FALSE(report.warning.empty());
  EXPECT_EQ(report.width, WorstCaseWidth(spec, 5000));
}

}  // namespace
}  // namespace fedfreq
