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

#include "fedfreq/multiround.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fedfreq/errors.h"

namespace fedfreq {

void RoundPlan::Validate() const {
  if (domain_size < 1)
    throw ArgumentError("RoundPlan: domain size must be >= 1");
  if (rounds.empty()) throw ArgumentError("RoundPlan: no rounds");
  const std::size_t n = rounds.front().size();
  if (n == 0) throw ArgumentError("RoundPlan: rounds must be non-empty");
  for (std::size_t m = 0; m < rounds.size(); ++m) {
    if (rounds[m].size() != n) {
      throw ArgumentError("RoundPlan: round " + std::to_string(m) + " has " +
                          std::to_string(rounds[m].size()) +
                          " clients, expected " + std::to_string(n));
    }
    for (ItemId item : rounds[m]) {
      if (item < 0 || item >= domain_size) {
        throw ArgumentError("RoundPlan: item " + std::to_string(item) +
                            " outside domain of size " +
                            std::to_string(domain_size));
      }
    }
  }
}

RoundPlan RoundPlan::FromItems(std::span<const ItemId> items, int num_rounds,
                               ItemId domain_size) {
  if (num_rounds < 1) throw ArgumentError("FromItems: need at least one round");
  if (items.empty() || items.size() % num_rounds != 0) {
    throw ArgumentError("FromItems: " + std::to_string(items.size()) +
                        " items do not split into " +
                        std::to_string(num_rounds) + " equal rounds");
  }
  const std::size_t n = items.size() / num_rounds;
  RoundPlan plan;
  plan.domain_size = domain_size;
  plan.rounds.reserve(num_rounds);
  for (int m = 0; m < num_rounds; ++m) {
    plan.rounds.emplace_back(items.begin() + m * n,
                             items.begin() + (m + 1) * n);
  }
  plan.Validate();
  return plan;
}

std::vector<ItemId> RoundPlan::Concatenated() const {
  std::vector<ItemId> all;
  all.reserve(static_cast<std::size_t>(total_clients()));
  for (const auto& round : rounds)
    all.insert(all.end(), round.begin(), round.end());
  return all;
}

std::vector<std::int64_t> RoundHistogram(const RoundPlan& plan, int round) {
  std::vector<std::int64_t> counts(plan.domain_size, 0);
  for (ItemId item : plan.rounds.at(round)) ++counts[item];
  return counts;
}

std::vector<SketchMatrix> RoundAggregates(
    const RoundPlan& plan, std::span<const HashFamily> families) {
  plan.Validate();
  const int rounds = plan.num_rounds();
  if (families.size() != 1 && static_cast<int>(families.size()) != rounds) {
    throw ArgumentError("RoundAggregates: expected 1 or " +
                        std::to_string(rounds) + " hash families, got " +
                        std::to_string(families.size()));
  }
  std::vector<SketchMatrix> out;
  out.reserve(rounds);
  for (int m = 0; m < rounds; ++m) {
    const bool per_round_family = families.size() != 1;
    const HashFamily& family = per_round_family ? families[m] : families[0];
    const int family_round =
        per_round_family || family.mode() == SignMode::kShared ? 0 : m;
    if (family.domain_size() != plan.domain_size) {
      throw ArgumentError("RoundAggregates: family domain size mismatch");
    }
    if (family_round >= family.num_rounds()) {
      throw ConfigurationError("RoundAggregates: family has " +
                               std::to_string(family.num_rounds()) +
                               " rounds, plan has " + std::to_string(rounds));
    }
    out.push_back(EncodeCounts(family, family_round, RoundHistogram(plan, m)));
  }
  return out;
}

HeterogeneityVector Heterogeneity(const RoundPlan& plan) {
  plan.Validate();
  // Sums of squared counts stay exact in 128 bits, so F_i <= f_i holds
  // bit-for-bit against the oracle's total / (M * n).
  const double total = static_cast<double>(plan.total_clients());
  std::vector<unsigned __int128> sum_sq(plan.domain_size, 0);
  for (int m = 0; m < plan.num_rounds(); ++m) {
    const auto counts = RoundHistogram(plan, m);
    for (ItemId i = 0; i < plan.domain_size; ++i) {
      const auto c = static_cast<unsigned __int128>(counts[i]);
      sum_sq[i] += c * c;
    }
  }
  HeterogeneityVector h;
  h.values.resize(plan.domain_size);
  for (ItemId i = 0; i < plan.domain_size; ++i) {
    const auto root =
        static_cast<double>(std::sqrt(static_cast<long double>(sum_sq[i])));
    h.values[i] = root / total;
  }
  h.sorted = h.values;
  std::sort(h.sorted.begin(), h.sorted.end(), std::greater<>());
  return h;
}

namespace {

std::int64_t CommonScale(std::span<const SketchMatrix> round_sketches) {
  if (round_sketches.empty()) throw ArgumentError("decode: no round sketches");
  const std::int64_t n = round_sketches.front().scale();
  if (n <= 0) throw InvalidStateError("decode: round sketch has no clients");
  for (const auto& s : round_sketches) {
    if (s.scale() != n) {
      throw ArgumentError("decode: rounds carry different client counts");
    }
  }
  return n;
}

void CheckRoundSketch(const SketchMatrix& sketch, const HashFamily& family,
                      int round) {
  if (sketch.rows() != family.num_rows() || sketch.width() != family.width() ||
      sketch.family_tag() != family.Tag(round)) {
    throw ArgumentError("decode: round " + std::to_string(round) +
                        " sketch was not produced by the given hash family");
  }
}

FrequencyEstimate EmptyEstimate(Strategy strategy, const HashFamily& family,
                                int rounds) {
  FrequencyEstimate e;
  e.strategy = strategy;
  e.rows = family.num_rows();
  e.width = family.width();
  e.rounds = rounds;
  e.seed = family.master_seed();
  e.values.resize(family.domain_size());
  return e;
}

// Median over rows of the round-averaged row estimators. `row_sum(l, j, b)`
// returns the sign-weighted sum over rounds of the bucket b entries of row l
// for item j; it is divided by `denominator`.
template <typename RowSum>
void MedianOfAverages(const HashFamily& family, double denominator,
                      RowSum&& row_sum, std::vector<double>& out) {
  const int rows = family.num_rows();
  std::vector<double> row_values(rows);
  for (ItemId j = 0; j < family.domain_size(); ++j) {
    for (int l = 0; l < rows; ++l) {
      row_values[l] = row_sum(l, j, family.BucketUnchecked(l, j)) / denominator;
    }
    out[j] = MedianInPlace(row_values);
  }
}

void CheckHybridFamily(const HashFamily& family, int rounds) {
  if (family.mode() != SignMode::kPerRound) {
    throw ConfigurationError(
        "hybrid decode needs a hash family with per-round signs");
  }
  if (family.num_rounds() != rounds) {
    throw ConfigurationError(
        "hybrid decode: family has " + std::to_string(family.num_rounds()) +
        " rounds, got " + std::to_string(rounds) + " round sketches");
  }
}

}  // namespace

FrequencyEstimate DecodeShared(std::span<const SketchMatrix> round_sketches,
                               const HashFamily& family) {
  if (family.mode() != SignMode::kShared) {
    throw ConfigurationError(
        "shared decode needs a hash family with round-independent signs");
  }
  CommonScale(round_sketches);
  for (const auto& s : round_sketches) CheckRoundSketch(s, family, 0);
  const SketchMatrix total = Aggregate(round_sketches);
  FrequencyEstimate e = DecodeSingleRound(total, family, 0);
  e.strategy = Strategy::kShared;
  e.rounds = static_cast<int>(round_sketches.size());
  return e;
}

FrequencyEstimate DecodeFresh(std::span<const SketchMatrix> round_sketches,
                              std::span<const HashFamily> families) {
  if (families.size() != round_sketches.size()) {
    throw ArgumentError("fresh decode: " + std::to_string(families.size()) +
                        " hash families for " +
                        std::to_string(round_sketches.size()) + " rounds");
  }
  CommonScale(round_sketches);
  const int rounds = static_cast<int>(round_sketches.size());
  FrequencyEstimate e = EmptyEstimate(Strategy::kFresh, families[0], rounds);
  for (int m = 0; m < rounds; ++m) {
    if (families[m].domain_size() != families[0].domain_size()) {
      throw ArgumentError("fresh decode: families disagree on domain size");
    }
    const FrequencyEstimate local =
        DecodeSingleRound(round_sketches[m], families[m], 0);
    for (std::size_t j = 0; j < e.values.size(); ++j) {
      e.values[j] += local.values[j];
    }
  }
  for (double& v : e.values) v /= rounds;
  return e;
}

FrequencyEstimate DecodeHybrid(std::span<const SketchMatrix> round_sketches,
                               const HashFamily& family) {
  const int rounds = static_cast<int>(round_sketches.size());
  CheckHybridFamily(family, rounds);
  const std::int64_t n = CommonScale(round_sketches);
  for (int m = 0; m < rounds; ++m) {
    CheckRoundSketch(round_sketches[m], family, m);
  }
  FrequencyEstimate e = EmptyEstimate(Strategy::kHybrid, family, rounds);
  // The sign-weighted round sum stays an exact integer; a single division by
  // N = M * n follows.
  MedianOfAverages(
      family, static_cast<double>(n) * rounds,
      [&](int l, ItemId j, int b) {
        std::int64_t sum = 0;
        for (int m = 0; m < rounds; ++m) {
          sum += family.SignUnchecked(l, m, j) * round_sketches[m].at(l, b);
        }
        return static_cast<double>(sum);
      },
      e.values);
  return e;
}

FrequencyEstimate DecodeHybridReal(std::span<const RealSketch> round_sketches,
                                   const HashFamily& family) {
  const int rounds = static_cast<int>(round_sketches.size());
  if (rounds == 0) throw ArgumentError("decode: no round sketches");
  if (family.mode() == SignMode::kPerRound) CheckHybridFamily(family, rounds);
  for (int m = 0; m < rounds; ++m) {
    const RealSketch& s = round_sketches[m];
    if (s.rows != family.num_rows() || s.width != family.width() ||
        s.family_tag !=
            family.Tag(family.mode() == SignMode::kShared ? 0 : m)) {
      throw ArgumentError("decode: round " + std::to_string(m) +
                          " sketch was not produced by the given hash family");
    }
  }
  FrequencyEstimate e =
      EmptyEstimate(family.mode() == SignMode::kShared ? Strategy::kShared
                                                       : Strategy::kHybrid,
                    family, rounds);
  MedianOfAverages(
      family, static_cast<double>(rounds),
      [&](int l, ItemId j, int b) {
        double sum = 0.0;
        for (int m = 0; m < rounds; ++m) {
          sum += family.SignUnchecked(l, m, j) * round_sketches[m].at(l, b);
        }
        return sum;
      },
      e.values);
  return e;
}

FrequencyEstimate DecodeFreshReal(std::span<const RealSketch> round_sketches,
                                  std::span<const HashFamily> families) {
  if (families.size() != round_sketches.size() || families.empty()) {
    throw ArgumentError("fresh decode: family count must equal round count");
  }
  const int rounds = static_cast<int>(round_sketches.size());
  FrequencyEstimate e = EmptyEstimate(Strategy::kFresh, families[0], rounds);
  std::vector<double> row_values(families[0].num_rows());
  for (int m = 0; m < rounds; ++m) {
    const HashFamily& family = families[m];
    const RealSketch& s = round_sketches[m];
    if (s.rows != family.num_rows() || s.width != family.width() ||
        s.family_tag != family.Tag(0) ||
        family.domain_size() != families[0].domain_size()) {
      throw ArgumentError("fresh decode: round " + std::to_string(m) +
                          " sketch does not match its hash family");
    }
    row_values.resize(family.num_rows());
    for (ItemId j = 0; j < family.domain_size(); ++j) {
      for (int l = 0; l < family.num_rows(); ++l) {
        row_values[l] = family.SignUnchecked(l, 0, j) *
                        s.at(l, family.BucketUnchecked(l, j));
      }
      e.values[j] += MedianInPlace(row_values);
    }
  }
  for (double& v : e.values) v /= rounds;
  return e;
}

FrequencyEstimate RunShared(const RoundPlan& plan, const HashFamily& family) {
  if (family.mode() != SignMode::kShared) {
    throw ConfigurationError("RunShared needs a shared-sign hash family");
  }
  // Shared-mode tags ignore the round, so every round encodes with round 0.
  plan.Validate();
  std::vector<SketchMatrix> sketches;
  sketches.reserve(plan.num_rounds());
  for (int m = 0; m < plan.num_rounds(); ++m) {
    sketches.push_back(EncodeCounts(family, 0, RoundHistogram(plan, m)));
  }
  return DecodeShared(sketches, family);
}

FrequencyEstimate RunFresh(const RoundPlan& plan,
                           std::span<const HashFamily> families) {
  plan.Validate();
  if (static_cast<int>(families.size()) != plan.num_rounds()) {
    throw ArgumentError("RunFresh: " + std::to_string(families.size()) +
                        " hash families for " +
                        std::to_string(plan.num_rounds()) + " rounds");
  }
  const auto sketches = RoundAggregates(plan, families);
  return DecodeFresh(sketches, families);
}

FrequencyEstimate RunHybrid(const RoundPlan& plan, const HashFamily& family) {
  plan.Validate();
  CheckHybridFamily(family, plan.num_rounds());
  const std::vector<HashFamily> families{family};
  const auto sketches = RoundAggregates(plan, families);
  return DecodeHybrid(sketches, family);
}

}  // namespace fedfreq
