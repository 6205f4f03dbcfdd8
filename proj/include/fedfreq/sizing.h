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

#ifndef FEDFREQ_SIZING_H_
#define FEDFREQ_SIZING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

// Target accuracy: the estimate should be within `tau` in l-infinity norm
// except with probability `p`. `constant` multiplies every width formula.
struct TargetSpec {
  double tau = 0.01;
  double p = 0.1;
  double constant = 2.0;

  void Validate() const;
};

// Rows for failure probability p over a domain of size d: ceil(ln(d / p)).
int RowsForDomain(ItemId domain_size, double p);

// E(W) = sqrt((1/W) * sum_{i > W} (f*_i)^2) for f* sorted non-increasing
// (1-based ranks). Throws ArgumentError on unsorted input or W < 1.
double TailError(std::span<const double> sorted_freqs, std::int64_t width);

// #{f_i >= tau} + (1/tau^2) * sum_{f_i < tau} f_i^2, the width before the
// constant and the cap at n. Input order does not matter.
double HeadTailWidth(std::span<const double> freqs, double tau);

// ceil(C * min{HeadTailWidth(f, tau), n}), at least 1.
std::int64_t OracleWidth(std::span<const double> freqs, const TargetSpec& spec,
                         std::int64_t num_clients);

// ceil(C * min{2 / tau, n}), at least 1.
std::int64_t WorstCaseWidth(const TargetSpec& spec, std::int64_t num_clients);

// Smallest W >= 1 with E(W) <= tau, by doubling then bisection (E is
// non-increasing in W). Returns sorted_freqs.size() + 1 at most.
std::int64_t MinimalWidth(std::span<const double> sorted_freqs, double tau);

// Two-parameter power law f*_i ~ beta * i^-alpha, truncated at i_star so the
// model is a valid frequency vector.
struct PowerLawFit {
  double alpha = 0.0;
  double beta = 0.0;
  std::int64_t i_star = 0;
  int k_top = 0;
  double residual = 0.0;
};

// Smallest alpha accepted as a decaying law.
inline constexpr double kMinFitExponent = 1e-6;

// max{i <= domain_size : sum_{j <= i} beta * j^-alpha <= 1}.
std::int64_t TruncationIndex(double alpha, double beta, ItemId domain_size);

// Least-squares fit of log f = log beta - alpha * log i over the top `k_top`
// estimates. Exact zeros are dropped; negative estimates are clamped to
// `floor` when it is positive and dropped otherwise. Throws FitError with
// fewer than two usable points or a non-decaying slope.
PowerLawFit FitPowerLaw(std::span<const double> estimates, int k_top,
                        double floor = 0.0);
PowerLawFit FitPowerLaw(const FrequencyEstimate& estimate, int k_top,
                        double floor = 0.0);

// beta * i^-alpha for i <= min(i_star, d), zero beyond; length d.
std::vector<double> PowerLawModel(const PowerLawFit& fit, ItemId domain_size);

struct PilotConfig {
  int rows = 16;
  int width = 100;
  int k_top = 20;
};

struct SizingReport {
  double tau = 0.0;
  int rows = 0;
  std::int64_t width = 0;
  std::int64_t worst_width = 0;
  std::optional<std::int64_t> oracle_width;
  std::int64_t predicted_bits = 0;
  std::optional<PowerLawFit> fit;
  bool fell_back = false;
  std::string warning;
};

// Two-phase sizing. Runs the single-round sketch `pilot` x pilot_config on
// the pilot clients, fits a power law to the top estimates and evaluates the
// oracle width on the fitted model. `num_clients` is the n of the production
// run (width cap and group size). Falls back to the worst-case width, with
// `fell_back` set, when the fit fails. When `true_freqs` is given the oracle
// width on them is reported too.
SizingReport TwoPhasePlan(std::span<const ItemId> pilot_items,
                          ItemId domain_size, const TargetSpec& spec,
                          const PilotConfig& pilot_config,
                          std::int64_t num_clients, std::uint64_t seed,
                          std::span<const double> true_freqs = {});

// Same, reusing an already decoded pilot estimate.
SizingReport TwoPhasePlanFromEstimate(const FrequencyEstimate& pilot,
                                      std::int64_t pilot_clients,
                                      const TargetSpec& spec, int k_top,
                                      std::int64_t num_clients,
                                      std::span<const double> true_freqs = {});

}  // namespace fedfreq

#endif  // FEDFREQ_SIZING_H_
