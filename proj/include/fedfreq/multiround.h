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

#ifndef FEDFREQ_MULTIROUND_H_
#define FEDFREQ_MULTIROUND_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

// M rounds of n client items each, N = M * n clients in total.
struct RoundPlan {
  ItemId domain_size = 0;
  std::vector<std::vector<ItemId>> rounds;

  int num_rounds() const { return static_cast<int>(rounds.size()); }
  std::int64_t clients_per_round() const {
    return rounds.empty() ? 0 : static_cast<std::int64_t>(rounds[0].size());
  }
  std::int64_t total_clients() const {
    return clients_per_round() * num_rounds();
  }

  // Throws ArgumentError unless every round has the same positive length and
  // every item lies in [0, d).
  void Validate() const;

  // Splits `items` into M consecutive rounds of equal length.
  static RoundPlan FromItems(std::span<const ItemId> items, int num_rounds,
                             ItemId domain_size);

  // Items of all rounds in order.
  std::vector<ItemId> Concatenated() const;
};

// Count histogram of round `round` (length d).
std::vector<std::int64_t> RoundHistogram(const RoundPlan& plan, int round);

// Per-round aggregate sketches. `families` holds either one family shared by
// every round or one family per round.
std::vector<SketchMatrix> RoundAggregates(const RoundPlan& plan,
                                          std::span<const HashFamily> families);

// F_i = (1/M) * sqrt(sum_m (f_i^(m))^2), plus the same values sorted in
// non-increasing order.
struct HeterogeneityVector {
  std::vector<double> values;
  std::vector<double> sorted;
};

HeterogeneityVector Heterogeneity(const RoundPlan& plan);

// Shared design: one family (kShared signs) in every round; the round
// aggregates are summed and decoded as one sketch over N clients. Throws
// ConfigurationError for a per-round family.
FrequencyEstimate RunShared(const RoundPlan& plan, const HashFamily& family);

// Fresh design: an independent family per round, a single-round decode per
// round, then the unweighted mean of the M estimates.
FrequencyEstimate RunFresh(const RoundPlan& plan,
                           std::span<const HashFamily> families);

// Hybrid design: shared buckets, per-round signs (kPerRound family).
// dec(j) = median_l (1/M) sum_m sigma_l^(m)(j) * S^(m)[l, h_l(j)] / n.
FrequencyEstimate RunHybrid(const RoundPlan& plan, const HashFamily& family);

// Decoders over already aggregated round sketches (for instance the output
// of secure aggregation). All rounds must carry the same client count.
FrequencyEstimate DecodeShared(std::span<const SketchMatrix> round_sketches,
                               const HashFamily& family);
FrequencyEstimate DecodeFresh(std::span<const SketchMatrix> round_sketches,
                              std::span<const HashFamily> families);
FrequencyEstimate DecodeHybrid(std::span<const SketchMatrix> round_sketches,
                               const HashFamily& family);

// Decoders over real-valued frequency-scale round sketches, e.g. after
// Gaussian noise was added. The hybrid decoder also serves the shared design
// when given a kShared family.
FrequencyEstimate DecodeHybridReal(std::span<const RealSketch> round_sketches,
                                   const HashFamily& family);
FrequencyEstimate DecodeFreshReal(std::span<const RealSketch> round_sketches,
                                  std::span<const HashFamily> families);

}  // namespace fedfreq

#endif  // FEDFREQ_MULTIROUND_H_
