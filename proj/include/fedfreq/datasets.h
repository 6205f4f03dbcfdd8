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

#ifndef FEDFREQ_DATASETS_H_
#define FEDFREQ_DATASETS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedfreq/hashing.h"
#include "fedfreq/multiround.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

// Normalized law f_i proportional to i^-a over items 0..d-1 (item i has
// rank i + 1).
std::vector<double> ZipfFrequencies(ItemId domain_size, double exponent);

// `num_clients` i.i.d. draws from ZipfFrequencies(d, a). Deterministic for a
// given seed on every platform (inverse-CDF sampling on a 53-bit uniform).
std::vector<ItemId> GenerateZipf(ItemId domain_size, std::int64_t num_clients,
                                 double exponent, std::uint64_t seed);

// Integer counts summing to `total` that follow `freqs` as closely as
// possible (largest-remainder rounding; ties go to the lower item id).
std::vector<std::int64_t> RoundToCounts(std::span<const double> freqs,
                                        std::int64_t total);

// A plan whose M rounds all hold the same multiset of n items, built from
// RoundToCounts(freqs, n). Every round's local frequency vector is identical.
RoundPlan MakeHomogeneousPlan(std::span<const double> freqs, int num_rounds,
                              std::int64_t clients_per_round);

// Fisher-Yates shuffle with a seeded generator.
void ShuffleItems(std::vector<ItemId>& items, std::uint64_t seed);

struct ItemStream {
  std::vector<ItemId> items;
  ItemId domain_size = 0;
};

// Reads newline-separated item ids, or "id,count" lines expanded to `count`
// copies of `id`. Blank lines and lines starting with '#' are skipped. The
// domain size is 1 + the largest id unless `domain_size` is given. Throws
// ParseError (with the line number) on malformed lines or an empty input and
// ArgumentError when an id is outside a declared domain.
ItemStream ParseItems(std::istream& in,
                      std::optional<ItemId> domain_size = std::nullopt);
ItemStream LoadItems(const std::string& path,
                     std::optional<ItemId> domain_size = std::nullopt);

// Exact frequencies of a plan: global counts over M * n clients and per-round
// counts over n.
struct ExactFrequencies {
  FrequencyVector global;
  std::vector<FrequencyVector> per_round;
};

ExactFrequencies ExactOracle(const RoundPlan& plan);

// Sorted non-increasing copy.
std::vector<double> SortedDescending(std::span<const double> values);

}  // namespace fedfreq

#endif  // FEDFREQ_DATASETS_H_
