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

#ifndef FEDFREQ_PRIVACY_H_
#define FEDFREQ_PRIVACY_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>

#include "fedfreq/hashing.h"
#include "fedfreq/multiround.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

// Gaussian-mechanism parameters. The calibration holds for epsilon < 1 and
// delta < 0.1; c0 is the calibration constant.
struct PrivacyParams {
  double epsilon = 0.5;
  double delta = 1e-6;
  double c0 = std::sqrt(2.0);

  // Throws OutOfRegimeError outside 0 < epsilon < 1, 0 < delta < 0.1, or
  // for a non-positive c0.
  void Validate() const;
};

// sigma = c0 * sqrt(L * ln(1/delta)) / (n * epsilon), at frequency scale.
double CalibrateSigma(const PrivacyParams& params, int rows,
                      std::int64_t clients_per_round);

// Adds an independent N(0, sigma^2) draw to each entry. Noise for row l of
// round m comes from its own stream seeded by (rng_seed, m, l), so the
// result does not depend on traversal order.
RealSketch PrivatizeRoundSketch(const RealSketch& sketch, double sigma,
                                std::uint64_t rng_seed, int round = 0);

// Converts a round aggregate to frequency scale, then privatizes it.
RealSketch PrivatizeRoundSketch(const SketchMatrix& sketch, double sigma,
                                std::uint64_t rng_seed, int round = 0);

// Hybrid sketch with noisy round aggregates, decoded by the hybrid rule.
FrequencyEstimate RunHybridPrivate(const RoundPlan& plan,
                                   const HashFamily& family, double sigma,
                                   std::uint64_t rng_seed);

// Replaces one random client's item with a uniformly random item `trials`
// times and returns the largest l2 norm of the change in the concatenated
// frequency-scale round sketches.
double L2SensitivityProbe(const RoundPlan& plan, const HashFamily& family,
                          int trials, std::uint64_t seed);

// l2 norm of the change in round `round`'s frequency-scale sketch when one
// of n clients switches from `old_item` to `new_item`.
double NeighborSketchChange(const HashFamily& family, int round,
                            ItemId old_item, ItemId new_item,
                            std::int64_t clients_per_round);

// C * sqrt(sum_{i > W} (F*_i)^2 / W): the hybrid tail bound.
double HybridErrorBound(std::span<const double> sorted_heterogeneity,
                        std::int64_t width, double constant = 2.0);

// sqrt(L * ln(1/delta)) / (n * sqrt(M) * epsilon), with L standing for
// log(d/p). Equals sigma / (c0 * sqrt(M)).
double DpErrorTerm(const PrivacyParams& params, int rows, int rounds,
                   std::int64_t clients_per_round);

// C * (tail term + DP term). Without privacy parameters (no noise) the DP
// term is zero and the value equals HybridErrorBound.
double DpErrorBound(std::span<const double> sorted_heterogeneity,
                    std::int64_t width, int rows, int rounds,
                    std::int64_t clients_per_round,
                    const std::optional<PrivacyParams>& params,
                    double constant = 2.0);

}  // namespace fedfreq

#endif  // FEDFREQ_PRIVACY_H_
