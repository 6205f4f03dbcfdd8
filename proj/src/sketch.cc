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
#include <string>

#include "fedfreq/errors.h"

namespace fedfreq {

SketchMatrix::SketchMatrix(int rows, int width, std::uint64_t seed,
                           std::uint64_t family_tag)
    : rows_(rows), width_(width), seed_(seed), family_tag_(family_tag) {
  if (rows < 1 || width < 1) {
    throw ArgumentError("SketchMatrix: rows and width must be positive");
  }
  counts_.assign(static_cast<std::size_t>(rows) * width, 0);
}

bool SketchMatrix::Compatible(const SketchMatrix& other) const {
  return rows_ == other.rows_ && width_ == other.width_ &&
         seed_ == other.seed_ && family_tag_ == other.family_tag_;
}

SketchMatrix& SketchMatrix::operator+=(const SketchMatrix& other) {
  if (!Compatible(other)) {
    throw ArgumentError("SketchMatrix: cannot add sketches of shape " +
                        std::to_string(other.rows_) + "x" +
                        std::to_string(other.width_) + " and " +
                        std::to_string(rows_) + "x" + std::to_string(width_) +
                        " or from different hash families");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
  scale_ += other.scale_;
  return *this;
}

RealSketch ToFrequencyScale(const SketchMatrix& sketch) {
  if (sketch.scale() <= 0) {
    throw InvalidStateError("ToFrequencyScale: sketch has no clients");
  }
  RealSketch out{sketch.rows(), sketch.width(), sketch.family_tag(), {}};
  const double n = static_cast<double>(sketch.scale());
  out.values.reserve(sketch.counts().size());
  for (std::int64_t c : sketch.counts()) {
    out.values.push_back(static_cast<double>(c) / n);
  }
  return out;
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSingleRound:
      return "single";
    case Strategy::kShared:
      return "shared";
    case Strategy::kFresh:
      return "fresh";
    case Strategy::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "single") return Strategy::kSingleRound;
  if (name == "shared") return Strategy::kShared;
  if (name == "fresh") return Strategy::kFresh;
  if (name == "hybrid") return Strategy::kHybrid;
  throw ArgumentError("unknown strategy '" + std::string(name) +
                      "' (expected shared, fresh, hybrid or single)");
}

double MedianInPlace(std::span<double> values) {
  if (values.empty()) throw ArgumentError("MedianInPlace: empty input");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

SketchMatrix EncodeItem(const HashFamily& family, int round, ItemId item) {
  if (item < 0 || item >= family.domain_size()) {
    throw ArgumentError("EncodeItem: item " + std::to_string(item) +
                        " outside domain of size " +
                        std::to_string(family.domain_size()));
  }
  if (round < 0 || round >= family.num_rounds()) {
    throw ArgumentError("EncodeItem: round " + std::to_string(round) +
                        " out of range");
  }
  SketchMatrix sketch(family.num_rows(), family.width(), family.master_seed(),
                      family.Tag(round));
  for (int l = 0; l < family.num_rows(); ++l) {
    sketch.at(l, family.BucketUnchecked(l, item)) =
        family.SignUnchecked(l, round, item);
  }
  sketch.set_scale(1);
  return sketch;
}

SketchMatrix EncodeCounts(const HashFamily& family, int round,
                          std::span<const std::int64_t> counts) {
  if (static_cast<ItemId>(counts.size()) != family.domain_size()) {
    throw ArgumentError(
        "EncodeCounts: histogram length " + std::to_string(counts.size()) +
        " differs from domain size " + std::to_string(family.domain_size()));
  }
  if (round < 0 || round >= family.num_rounds()) {
    throw ArgumentError("EncodeCounts: round " + std::to_string(round) +
                        " out of range");
  }
  SketchMatrix sketch(family.num_rows(), family.width(), family.master_seed(),
                      family.Tag(round));
  std::int64_t total = 0;
  for (ItemId j = 0; j < static_cast<ItemId>(counts.size()); ++j) {
    const std::int64_t c = counts[j];
    if (c == 0) continue;
    if (c < 0) throw ArgumentError("EncodeCounts: negative count");
    total += c;
    for (int l = 0; l < family.num_rows(); ++l) {
      sketch.at(l, family.BucketUnchecked(l, j)) +=
          c * family.SignUnchecked(l, round, j);
    }
  }
  sketch.set_scale(total);
  return sketch;
}

SketchMatrix EncodeClients(const HashFamily& family, int round,
                           std::span<const ItemId> items) {
  std::vector<std::int64_t> counts(family.domain_size(), 0);
  for (ItemId item : items) {
    if (item < 0 || item >= family.domain_size()) {
      throw ArgumentError("EncodeClients: item " + std::to_string(item) +
                          " outside domain");
    }
    ++counts[item];
  }
  return EncodeCounts(family, round, counts);
}

SketchMatrix Aggregate(std::span<const SketchMatrix> sketches) {
  if (sketches.empty()) throw ArgumentError("Aggregate: no sketches");
  SketchMatrix total = sketches.front();
  for (std::size_t i = 1; i < sketches.size(); ++i) total += sketches[i];
  return total;
}

namespace {

void CheckDecodable(const SketchMatrix& sketch, const HashFamily& family,
                    int round) {
  if (sketch.scale() <= 0) {
    throw InvalidStateError("decode: sketch has no contributing clients");
  }
  if (round < 0 || round >= family.num_rounds()) {
    throw ArgumentError("decode: round out of range");
  }
  if (sketch.rows() != family.num_rows() || sketch.width() != family.width() ||
      sketch.family_tag() != family.Tag(round)) {
    throw ArgumentError("decode: sketch was not produced by this hash family");
  }
}

}  // namespace

FrequencyEstimate DecodeSingleRound(const SketchMatrix& sketch,
                                    const HashFamily& family, int round) {
  CheckDecodable(sketch, family, round);
  const int rows = family.num_rows();
  const double n = static_cast<double>(sketch.scale());
  FrequencyEstimate estimate;
  estimate.strategy = Strategy::kSingleRound;
  estimate.rows = rows;
  estimate.width = family.width();
  estimate.rounds = 1;
  estimate.seed = family.master_seed();
  estimate.values.resize(family.domain_size());
  std::vector<double> row_values(rows);
  for (ItemId j = 0; j < family.domain_size(); ++j) {
    for (int l = 0; l < rows; ++l) {
      row_values[l] =
          static_cast<double>(family.SignUnchecked(l, round, j) *
                              sketch.at(l, family.BucketUnchecked(l, j))) /
          n;
    }
    estimate.values[j] = MedianInPlace(row_values);
  }
  return estimate;
}

std::vector<double> RowEstimates(const SketchMatrix& sketch,
                                 const HashFamily& family, int round,
                                 ItemId item) {
  CheckDecodable(sketch, family, round);
  if (item < 0 || item >= family.domain_size()) {
    throw ArgumentError("RowEstimates: item out of range");
  }
  std::vector<double> out(family.num_rows());
  for (int l = 0; l < family.num_rows(); ++l) {
    out[l] =
        static_cast<double>(family.SignUnchecked(l, round, item) *
                            sketch.at(l, family.BucketUnchecked(l, item))) /
        static_cast<double>(sketch.scale());
  }
  return out;
}

double LinfError(std::span<const double> estimate,
                 std::span<const double> truth) {
  if (estimate.size() != truth.size()) {
    throw ArgumentError("LinfError: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    worst = std::max(worst, std::abs(estimate[i] - truth[i]));
  }
  return worst;
}

ItemId CountOverThreshold(std::span<const double> estimate,
                          std::span<const double> truth, double threshold) {
  if (estimate.size() != truth.size()) {
    throw ArgumentError("CountOverThreshold: length mismatch");
  }
  ItemId count = 0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (std::abs(estimate[i] - truth[i]) > threshold) ++count;
  }
  return count;
}

}  // namespace fedfreq
