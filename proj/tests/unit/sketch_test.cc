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

#include "fedfreq/sketch.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fedfreq/datasets.h"
#include "fedfreq/errors.h"
#include "fedfreq/hashing.h"
#include "fedfreq/multiround.h"
#include "fedfreq/sizing.h"
#include "gtest/gtest.h"

namespace fedfreq {
namespace {

TEST(EncodeItemTest, ForcedPlacementWithOneCell) {
  const HashFamily family(9, 1, 1, 20);
  for (ItemId j = 0; j < 20; ++j) {
    const SketchMatrix s = EncodeItem(family, 0, j);
    EXPECT_EQ(s.at(0, 0), family.Sign(0, 0, j));
    EXPECT_EQ(s.scale(), 1);
  }
}

TEST(EncodeItemTest, OneSignedEntryPerRow) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const HashFamily family(rng(), 1 + trial % 7, 1 + trial % 50, 1000, 3,
                            SignMode::kPerRound);
    const ItemId j = static_cast<ItemId>(rng() % 1000);
    const int round = trial % 3;
    const SketchMatrix s = EncodeItem(family, round, j);
    for (int l = 0; l < family.num_rows(); ++l) {
      int nonzero = 0;
      for (int k = 0; k < family.width(); ++k) {
        if (s.at(l, k) != 0) {
          ++nonzero;
          EXPECT_EQ(k, family.Bucket(l, j));
          EXPECT_EQ(s.at(l, k), family.Sign(l, round, j));
        }
      }
      EXPECT_EQ(nonzero, 1);
    }
  }
}

TEST(EncodeItemTest, RejectsOutOfDomain) {
  const HashFamily family(1, 2, 4, 10);
  EXPECT_THROW(EncodeItem(family, 0, 10), ArgumentError);
  EXPECT_THROW(EncodeItem(family, 0, -1), ArgumentError);
}

TEST(AggregateTest, Linearity) {
  const HashFamily family(2, 4, 16, 100);
  const SketchMatrix once = EncodeItem(family, 0, 7);
  SketchMatrix twice = once;
  twice += once;
  for (int l = 0; l < 4; ++l) {
    for (int k = 0; k < 16; ++k) EXPECT_EQ(twice.at(l, k), 2 * once.at(l, k));
  }
  EXPECT_EQ(twice.scale(), 2);
}

TEST(AggregateTest, Singleton) {
  const HashFamily family(3, 3, 8, 30);
  const SketchMatrix s = EncodeItem(family, 0, 4);
  const std::vector<SketchMatrix> one = {s};
  EXPECT_EQ(Aggregate(one), s);
}

TEST(AggregateTest, RepeatedItem) {
  const HashFamily family(4, 5, 32, 100);
  const std::vector<SketchMatrix> copies(37, EncodeItem(family, 0, 12));
  const SketchMatrix sum = Aggregate(copies);
  for (int l = 0; l < 5; ++l) {
    for (int k = 0; k < 32; ++k) {
      const std::int64_t expected =
          k == family.Bucket(l, 12) ? 37 * family.Sign(l, 0, 12) : 0;
      EXPECT_EQ(sum.at(l, k), expected);
    }
  }
}

TEST(AggregateTest, MatchesHistogramOperator) {
  // The aggregate equals the L x d sketch operator applied to the count
  // histogram, built here as an explicit matrix product.
  const ItemId d = 50;
  const int rows = 4;
  const int width = 12;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const HashFamily family(rng(), rows, width, d);
    std::vector<ItemId> items(200);
    std::vector<std::int64_t> histogram(d, 0);
    std::vector<SketchMatrix> parts;
    for (auto& x : items) {
      x = static_cast<ItemId>(rng() % d);
      ++histogram[x];
      parts.push_back(EncodeItem(family, 0, x));
    }
    const SketchMatrix sum = Aggregate(parts);
    for (int l = 0; l < rows; ++l) {
      for (int k = 0; k < width; ++k) {
        std::int64_t expected = 0;
        for (ItemId j = 0; j < d; ++j) {
          const int op = family.Bucket(l, j) == k ? family.Sign(l, 0, j) : 0;
          expected += op * histogram[j];
        }
        EXPECT_EQ(sum.at(l, k), expected);
      }
    }
    EXPECT_EQ(EncodeCounts(family, 0, histogram), sum);
    EXPECT_EQ(EncodeClients(family, 0, items), sum);
  }
}

TEST(AggregateTest, EntriesBoundedByClientCount) {
  const HashFamily family(6, 3, 10, 40);
  std::mt19937_64 rng(6);
  std::vector<ItemId> items(150);
  for (auto& x : items) x = static_cast<ItemId>(rng() % 40);
  const SketchMatrix sum = EncodeClients(family, 0, items);
  for (int l = 0; l < 3; ++l) {
    std::int64_t abs_sum = 0;
    for (auto v : sum.row(l)) {
      EXPECT_LE(std::abs(v), 150);
      abs_sum += std::abs(v);
    }
    EXPECT_LE(abs_sum, 150);
  }
}

TEST(AggregateTest, RejectsMismatchedShapes) {
  const HashFamily a(1, 2, 8, 10);
  const HashFamily b(1, 2, 9, 10);
  const HashFamily c(2, 2, 8, 10);
  SketchMatrix s = EncodeItem(a, 0, 1);
  EXPECT_THROW(s += EncodeItem(b, 0, 1), ArgumentError);
  EXPECT_THROW(s += EncodeItem(c, 0, 1), ArgumentError);
  EXPECT_THROW(Aggregate(std::vector<SketchMatrix>{}), ArgumentError);
}

TEST(MedianTest, OddAndEven) {
  std::vector<double> odd = {3, 1, 2};
  EXPECT_EQ(MedianInPlace(odd), 2);
  std::vector<double> even = {4, 1, 3, 2};
  EXPECT_EQ(MedianInPlace(even), 2.5);
  std::vector<double> same(7, 0.25);
  EXPECT_EQ(MedianInPlace(same), 0.25);
}

TEST(DecodeTest, SingleClientIsExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const HashFamily family(seed, 7, 4, 100);
    const ItemId x = static_cast<ItemId>(seed % 100);
    const auto estimate = DecodeSingleRound(EncodeItem(family, 0, x), family);
    EXPECT_EQ(estimate.values[x], 1.0);
    EXPECT_EQ(estimate.domain_size(), 100);
  }
}

TEST(DecodeTest, MatchesRowMedianDefinition) {
  const ItemId d = 300;
  const HashFamily family(12, 6, 16, d);
  const auto items = GenerateZipf(d, 500, 1.2, 3);
  const SketchMatrix sketch = EncodeClients(family, 0, items);
  const auto estimate = DecodeSingleRound(sketch, family);
  for (ItemId j = 0; j < d; ++j) {
    std::vector<double> rows;
    for (int l = 0; l < 6; ++l) {
      rows.push_back(family.Sign(l, 0, j) * sketch.at(l, family.Bucket(l, j)) /
                     500.0);
    }
    std::sort(rows.begin(), rows.end());
    EXPECT_DOUBLE_EQ(estimate.values[j], 0.5 * (rows[2] + rows[3]));
    EXPECT_EQ(RowEstimates(sketch, family, 0, j).size(), 6u);
  }
}

TEST(DecodeTest, EmptySketchIsInvalidState) {
  const HashFamily family(1, 2, 4, 10);
  const SketchMatrix empty(2, 4, 1, family.Tag(0));
  EXPECT_THROW(DecodeSingleRound(empty, family), InvalidStateError);
}

TEST(DecodeTest, RejectsForeignFamily) {
  const HashFamily family(1, 2, 4, 10);
  const HashFamily other(2, 2, 4, 10);
  EXPECT_THROW(DecodeSingleRound(EncodeItem(family, 0, 1), other),
               ArgumentError);
}

TEST(DecodeTest, LinearInClientBatches) {
  const ItemId d = 400;
  const HashFamily family(14, 5, 32, d);
  const auto a = GenerateZipf(d, 300, 1.5, 1);
  const auto b = GenerateZipf(d, 200, 1.5, 2);
  std::vector<ItemId> joint = a;
  joint.insert(joint.end(), b.begin(), b.end());
  SketchMatrix sum = EncodeClients(family, 0, a);
  sum += EncodeClients(family, 0, b);
  EXPECT_EQ(DecodeSingleRound(sum, family).values,
            DecodeSingleRound(EncodeClients(family, 0, joint), family).values);
}

TEST(DecodeTest, RowEstimatorIsUnbiased) {
  const ItemId d = 60;
  const auto items = GenerateZipf(d, 400, 1.0, 8);
  std::vector<std::int64_t> hist(d, 0);
  for (auto x : items) ++hist[x];
  for (ItemId j : {ItemId{0}, ItemId{5}, ItemId{40}}) {
    const double truth = hist[j] / 400.0;
    const int trials = 10000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < trials; ++s) {
      const HashFamily family(1000 + s, 1, 8, d);
      const double v =
          RowEstimates(EncodeCounts(family, 0, hist), family, 0, j)[0];
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
    EXPECT_LT(std::abs(mean - truth), 4 * se) << "item " << j;
  }
}

TEST(DecodeTest, LooseBoundHoldsWithLogRows) {
  // With L = ceil(ln(d/p)), the l-inf error reaches 2/W in fewer than a p
  // fraction of trials.
  const ItemId d = 1000;
  const double p = 0.1;
  const int rows = RowsForDomain(d, p);
  for (double a : {1.1, 2.0}) {
    const auto items = GenerateZipf(d, 1000, a, 3);
    const auto truth = ExactOracle(RoundPlan::FromItems(items, 1, d)).global;
    std::vector<std::int64_t> hist(d, 0);
    for (auto x : items) ++hist[x];
    for (int width : {16, 64}) {
      int exceed = 0;
      for (int s = 0; s < 1000; ++s) {
        const HashFamily family(s, rows, width, d);
        const auto est =
            DecodeSingleRound(EncodeCounts(family, 0, hist), family);
        exceed += LinfError(est.values, truth) >= 2.0 / width;
      }
      EXPECT_LT(exceed, 100) << "a=" << a << " W=" << width;
    }
  }
}

TEST(MetricsTest, LinfAndThreshold) {
  const std::vector<double> est = {0.5, 0.2, 0.0};
  const std::vector<double> truth = {0.4, 0.4, 0.2};
  EXPECT_DOUBLE_EQ(LinfError(est, truth), 0.2);
  EXPECT_EQ(CountOverThreshold(est, truth, 0.15), 2);
  EXPECT_EQ(CountOverThreshold(est, truth, 0.25), 0);
  EXPECT_THROW(LinfError(est, std::vector<double>{1.0}), ArgumentError);
}

TEST(StrategyTest, NamesRoundTrip) {
  for (auto s : {Strategy::kSingleRound, Strategy::kShared, Strategy::kFresh,
                 Strategy::kHybrid}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_THROW(ParseStrategy("median"), ArgumentError);
}

}  // namespace
}  // namespace fedfreq
