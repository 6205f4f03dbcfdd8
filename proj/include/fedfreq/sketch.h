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

#ifndef FEDFREQ_SKETCH_H_
#define FEDFREQ_SKETCH_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedfreq/hashing.h"

namespace fedfreq {

// Exact or estimated frequencies indexed by item id.
using FrequencyVector = std::vector<double>;

// An L x W table of signed counts at client-count scale, together with the
// number of clients that contributed to it. Division by the client count
// happens only at decode time, so aggregation stays exact.
class SketchMatrix {
 public:
  SketchMatrix() = default;
  SketchMatrix(int rows, int width, std::uint64_t seed = 0,
               std::uint64_t family_tag = 0);

  int rows() const { return rows_; }
  int width() const { return width_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t family_tag() const { return family_tag_; }
  std::int64_t scale() const { return scale_; }
  void set_scale(std::int64_t scale) { scale_ = scale; }

  std::int64_t& at(int row, int col) {
    return counts_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::int64_t at(int row, int col) const {
    return counts_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::span<const std::int64_t> row(int r) const {
    return {counts_.data() + static_cast<std::size_t>(r) * width_,
            static_cast<std::size_t>(width_)};
  }
  // Row-major view of all entries.
  std::span<const std::int64_t> counts() const { return counts_; }
  std::span<std::int64_t> mutable_counts() { return counts_; }

  // True when `other` may be added to this sketch.
  bool Compatible(const SketchMatrix& other) const;

  // Entrywise sum; scales add. Throws ArgumentError on mismatch.
  SketchMatrix& operator+=(const SketchMatrix& other);

  bool operator==(const SketchMatrix&) const = default;

 private:
  int rows_ = 0;
  int width_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t family_tag_ = 0;
  std::int64_t scale_ = 0;
  std::vector<std::int64_t> counts_;
};

// Real-valued sketch at frequency scale (counts divided by the client count),
// the form on which Gaussian noise is added.
struct RealSketch {
  int rows = 0;
  int width = 0;
  std::uint64_t family_tag = 0;
  std::vector<double> values;

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
};

RealSketch ToFrequencyScale(const SketchMatrix& sketch);

enum class Strategy { kSingleRound, kShared, kFresh, kHybrid };

std::string_view StrategyName(Strategy strategy);
// Accepts "single", "shared", "fresh", "hybrid".
Strategy ParseStrategy(std::string_view name);

struct FrequencyEstimate {
  std::vector<double> values;
  Strategy strategy = Strategy::kSingleRound;
  int rows = 0;
  int width = 0;
  int rounds = 1;
  std::uint64_t seed = 0;

  ItemId domain_size() const { return static_cast<ItemId>(values.size()); }
};

// Median of `values`, reordering them. An even count averages the two middle
// order statistics. Throws ArgumentError on an empty span.
double MedianInPlace(std::span<double> values);

// One client's sketch of `item` in `round`: a single +-1 per row at
// column h_l(item) with sign sigma_l^(round)(item).
SketchMatrix EncodeItem(const HashFamily& family, int round, ItemId item);

// The linear sketch operator applied to a count histogram (length d). Equal
// entrywise to aggregating one EncodeItem per counted client.
SketchMatrix EncodeCounts(const HashFamily& family, int round,
                          std::span<const std::int64_t> counts);

// Encodes and aggregates a list of client items.
SketchMatrix EncodeClients(const HashFamily& family, int round,
                           std::span<const ItemId> items);

// Entrywise sum of compatible sketches.
SketchMatrix Aggregate(std::span<const SketchMatrix> sketches);

// Median over rows of sigma_l(j) * counts[l, h_l(j)] / n for every item j.
// Throws InvalidStateError when the sketch has no contributing clients and
// ArgumentError when the sketch was not produced by `family` in `round`.
FrequencyEstimate DecodeSingleRound(const SketchMatrix& sketch,
                                    const HashFamily& family, int round = 0);

// Per-row estimators sigma_l(j) * counts[l, h_l(j)] / n for one item.
std::vector<double> RowEstimates(const SketchMatrix& sketch,
                                 const HashFamily& family, int round,
                                 ItemId item);

// Max_j |estimate_j - truth_j|.
double LinfError(std::span<const double> estimate,
                 std::span<const double> truth);

// Number of items whose absolute error exceeds `threshold`.
ItemId CountOverThreshold(std::span<const double> estimate,
                          std::span<const double> truth, double threshold);

}  // namespace fedfreq

#endif  // FEDFREQ_SKETCH_H_
