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

#include "fedfreq/privacy.h"

#include <random>
#include <string>

#include "fedfreq/errors.h"

namespace fedfreq {
namespace {

constexpr std::uint64_t kNoiseRole = 0x6e6f697365000006ULL;
constexpr std::uint64_t kProbeRole = 0x70726f6265000007ULL;

}  // namespace

void PrivacyParams::Validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw OutOfRegimeError("privacy: epsilon must lie in (0, 1), got " +
                           std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 0.1)) {
    throw OutOfRegimeError("privacy: delta must lie in (0, 0.1), got " +
                           std::to_string(delta));
  }
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw OutOfRegimeError("privacy: c0 must be positive");
  }
}

double CalibrateSigma(const PrivacyParams& params, int rows,
                      std::int64_t clients_per_round) {
  params.Validate();
  if (rows < 1 || clients_per_round < 1) {
    throw ArgumentError("CalibrateSigma: rows and n must be >= 1");
  }
  return params.c0 * std::sqrt(rows * std::log(1.0 / params.delta)) /
         (static_cast<double>(clients_per_round) * params.epsilon);
}

RealSketch PrivatizeRoundSketch(const RealSketch& sketch, double sigma,
                                std::uint64_t rng_seed, int round) {
  if (!(sigma >= 0.0)) throw ArgumentError("privatize: sigma must be >= 0");
  RealSketch noisy = sketch;
  if (sigma == 0.0) return noisy;
  for (int l = 0; l < sketch.rows; ++l) {
    std::mt19937_64 rng(DeriveSeed(rng_seed, kNoiseRole,
                                   static_cast<std::uint64_t>(round),
                                   static_cast<std::uint64_t>(l)));
    std::normal_distribution<double> noise(0.0, sigma);
    for (int k = 0; k < sketch.width; ++k) {
      noisy.values[static_cast<std::size_t>(l) * sketch.width + k] +=
          noise(rng);
    }
  }
  return noisy;
}

RealSketch PrivatizeRoundSketch(const SketchMatrix& sketch, double sigma,
                                std::uint64_t rng_seed, int round) {
  return PrivatizeRoundSketch(ToFrequencyScale(sketch), sigma, rng_seed, round);
}

FrequencyEstimate RunHybridPrivate(const RoundPlan& plan,
                                   const HashFamily& family, double sigma,
                                   std::uint64_t rng_seed) {
  const std::vector<HashFamily> families{family};
  const auto aggregates = RoundAggregates(plan, families);
  std::vector<RealSketch> noisy;
  noisy.reserve(aggregates.size());
  for (int m = 0; m < static_cast<int>(aggregates.size()); ++m) {
    noisy.push_back(PrivatizeRoundSketch(aggregates[m], sigma, rng_seed, m));
  }
  return DecodeHybridReal(noisy, family);
}

double NeighborSketchChange(const HashFamily& family, int round,
                            ItemId old_item, ItemId new_item,
                            std::int64_t clients_per_round) {
  if (clients_per_round < 1) {
    throw ArgumentError("NeighborSketchChange: n must be >= 1");
  }
  // The two encodings differ in at most two cells per row.
  double sum_sq = 0.0;
  for (int l = 0; l < family.num_rows(); ++l) {
    const int b_old = family.Bucket(l, old_item);
    const int b_new = family.Bucket(l, new_item);
    const int s_old = family.Sign(l, round, old_item);
    const int s_new = family.Sign(l, round, new_item);
    if (b_old != b_new) {
      sum_sq += 2.0;
    } else {
      const double diff = s_new - s_old;
      sum_sq += diff * diff;
    }
  }
  return std::sqrt(sum_sq) / static_cast<double>(clients_per_round);
}

double L2SensitivityProbe(const RoundPlan& plan, const HashFamily& family,
                          int trials, std::uint64_t seed) {
  plan.Validate();
  if (trials < 1)
    throw ArgumentError("L2SensitivityProbe: trials must be >= 1");
  std::mt19937_64 rng(DeriveSeed(seed, kProbeRole));
  std::uniform_int_distribution<int> pick_round(0, plan.num_rounds() - 1);
  std::uniform_int_distribution<std::int64_t> pick_client(
      0, plan.clients_per_round() - 1);
  std::uniform_int_distribution<ItemId> pick_item(0, plan.domain_size - 1);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int m = pick_round(rng);
    const ItemId old_item = plan.rounds[m][pick_client(rng)];
    const ItemId new_item = pick_item(rng);
    const int family_round = family.mode() == SignMode::kShared ? 0 : m;
    worst = std::max(
        worst, NeighborSketchChange(family, family_round, old_item, new_item,
                                    plan.clients_per_round()));
  }
  return worst;
}

double HybridErrorBound(std::span<const double> sorted_heterogeneity,
                        std::int64_t width, double constant) {
  if (width < 1) throw ArgumentError("HybridErrorBound: width must be >= 1");
  double tail = 0.0;
  for (std::size_t i = static_cast<std::size_t>(width);
       i < sorted_heterogeneity.size(); ++i) {
    tail += sorted_heterogeneity[i] * sorted_heterogeneity[i];
  }
  return constant * std::sqrt(tail / static_cast<double>(width));
}

double DpErrorTerm(const PrivacyParams& params, int rows, int rounds,
                   std::int64_t clients_per_round) {
  params.Validate();
  if (rows < 1 || rounds < 1 || clients_per_round < 1) {
    throw ArgumentError("DpErrorTerm: rows, rounds and n must be >= 1");
  }
  return std::sqrt(rows * std::log(1.0 / params.delta)) /
         (static_cast<double>(clients_per_round) * std::sqrt(rounds) *
          params.epsilon);
}

double DpErrorBound(std::span<const double> sorted_heterogeneity,
                    std::int64_t width, int rows, int rounds,
                    std::int64_t clients_per_round,
                    const std::optional<PrivacyParams>& params,
                    double constant) {
  const double tail = HybridErrorBound(sorted_heterogeneity, width, constant);
  if (!params) return tail;
  return tail +
         constant * DpErrorTerm(*params, rows, rounds, clients_per_round);
}

}  // namespace fedfreq
