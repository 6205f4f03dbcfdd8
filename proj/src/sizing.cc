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
#include <functional>
#include <string>

#include "fedfreq/errors.h"
#include "fedfreq/securesum.h"

namespace fedfreq {

void TargetSpec::Validate() const {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ArgumentError("TargetSpec: tau must lie in (0, 1)");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw ArgumentError("TargetSpec: p must lie in (0, 1)");
  }
  if (!(constant > 0.0) || !std::isfinite(constant)) {
    throw ArgumentError("TargetSpec: constant must be positive");
  }
}

int RowsForDomain(ItemId domain_size, double p) {
  if (domain_size < 1) throw ArgumentError("RowsForDomain: empty domain");
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("RowsForDomain: p in (0,1)");
  return std::max(1, static_cast<int>(std::ceil(
                         std::log(static_cast<double>(domain_size) / p))));
}

double TailError(std::span<const double> sorted_freqs, std::int64_t width) {
  if (width < 1) throw ArgumentError("TailError: width must be >= 1");
  for (std::size_t i = 1; i < sorted_freqs.size(); ++i) {
    if (sorted_freqs[i] > sorted_freqs[i - 1]) {
      throw ArgumentError(
          "TailError: frequencies must be sorted "
          "non-increasing");
    }
  }
  double tail = 0.0;
  for (std::size_t i = static_cast<std::size_t>(
           std::min<std::int64_t>(width, sorted_freqs.size()));
       i < sorted_freqs.size(); ++i) {
    tail += sorted_freqs[i] * sorted_freqs[i];
  }
  return std::sqrt(tail / static_cast<double>(width));
}

double HeadTailWidth(std::span<const double> freqs, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("HeadTailWidth: tau must be positive");
  double head = 0.0;
  double tail = 0.0;
  for (double f : freqs) {
    if (f >= tau) {
      head += 1.0;
    } else {
      tail += f * f;
    }
  }
  return head + tail / (tau * tau);
}

namespace {

std::int64_t CeilWidth(double value) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(value)));
}

}  // namespace

std::int64_t OracleWidth(std::span<const double> freqs, const TargetSpec& spec,
                         std::int64_t num_clients) {
  spec.Validate();
  if (num_clients < 1) throw ArgumentError("OracleWidth: n must be >= 1");
  const double h = HeadTailWidth(freqs, spec.tau);
  return CeilWidth(spec.constant *
                   std::min(h, static_cast<double>(num_clients)));
}

std::int64_t WorstCaseWidth(const TargetSpec& spec, std::int64_t num_clients) {
  spec.Validate();
  if (num_clients < 1) throw ArgumentError("WorstCaseWidth: n must be >= 1");
  return CeilWidth(spec.constant *
                   std::min(2.0 / spec.tau, static_cast<double>(num_clients)));
}

std::int64_t MinimalWidth(std::span<const double> sorted_freqs, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("MinimalWidth: tau must be positive");
  const auto cap = std::max<std::int64_t>(1, sorted_freqs.size());
  std::int64_t hi = 1;
  while (hi < cap && TailError(sorted_freqs, hi) > tau) {
    hi = std::min(cap, hi * 2);
  }
  if (TailError(sorted_freqs, hi) > tau) return cap + 1;
  std::int64_t lo = hi / 2;  // E(lo) > tau, or lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (TailError(sorted_freqs, mid) <= tau) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::int64_t TruncationIndex(double alpha, double beta, ItemId domain_size) {
  double cumulative = 0.0;
  for (ItemId i = 1; i <= domain_size; ++i) {
    cumulative += beta * std::pow(static_cast<double>(i), -alpha);
    if (cumulative > 1.0) return i - 1;
  }
  return domain_size;
}

PowerLawFit FitPowerLaw(std::span<const double> estimates, int k_top,
                        double floor) {
  if (k_top < 2) throw ArgumentError("FitPowerLaw: k_top must be >= 2");
  std::vector<double> top(estimates.begin(), estimates.end());
  const std::size_t k = std::min<std::size_t>(k_top, top.size());
  std::partial_sort(top.begin(), top.begin() + k, top.end(), std::greater<>());
  top.resize(k);

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t r = 0; r < k; ++r) {
    double v = top[r];
    if (v < 0.0 && floor > 0.0) v = floor;
    if (!(v > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(r + 1)));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 2) {
    throw FitError("FitPowerLaw: fewer than two positive top estimates");
  }
  const double m = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw FitError("FitPowerLaw: degenerate ranks");
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  PowerLawFit fit;
  fit.alpha = -slope;
  fit.beta = std::exp(intercept);
  fit.k_top = static_cast<int>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    fit.residual += r * r;
  }
  if (!std::isfinite(fit.alpha) || !std::isfinite(fit.beta) ||
      fit.alpha < kMinFitExponent) {
    throw FitError("FitPowerLaw: top estimates do not decay (alpha = " +
                   std::to_string(fit.alpha) + ")");
  }
  fit.i_star = TruncationIndex(fit.alpha, fit.beta,
                               static_cast<ItemId>(estimates.size()));
  return fit;
}

PowerLawFit FitPowerLaw(const FrequencyEstimate& estimate, int k_top,
                        double floor) {
  return FitPowerLaw(estimate.values, k_top, floor);
}

std::vector<double> PowerLawModel(const PowerLawFit& fit, ItemId domain_size) {
  std::vector<double> model(domain_size, 0.0);
  const ItemId last = std::min<ItemId>(fit.i_star, domain_size);
  for (ItemId i = 1; i <= last; ++i) {
    model[i - 1] = fit.beta * std::pow(static_cast<double>(i), -fit.alpha);
  }
  return model;
}

SizingReport TwoPhasePlanFromEstimate(const FrequencyEstimate& pilot,
                                      std::int64_t pilot_clients,
                                      const TargetSpec& spec, int k_top,
                                      std::int64_t num_clients,
                                      std::span<const double> true_freqs) {
  spec.Validate();
  if (pilot_clients < 1) throw ArgumentError("TwoPhasePlan: empty pilot");
  const ItemId d = pilot.domain_size();
  SizingReport report;
  report.tau = spec.tau;
  report.rows = RowsForDomain(d, spec.p);
  report.worst_width = WorstCaseWidth(spec, num_clients);
  if (!true_freqs.empty()) {
    report.oracle_width = OracleWidth(true_freqs, spec, num_clients);
  }
  try {
    PowerLawFit fit = FitPowerLaw(
        pilot, k_top, 1.0 / (2.0 * static_cast<double>(pilot_clients)));
    if (fit.i_star < 1) {
      throw FitError("TwoPhasePlan: fitted scale exceeds 1 (empty model)");
    }
    const auto model = PowerLawModel(fit, d);
    report.width = OracleWidth(model, spec, num_clients);
    report.fit = fit;
  } catch (const FitError& e) {
    report.width = report.worst_width;
    report.fell_back = true;
    report.warning = e.what();
  }
  report.predicted_bits = CommCostBits(
      report.rows,
      static_cast<int>(std::min<std::int64_t>(report.width, 1 << 30)),
      GroupParams::ForClients(num_clients));
  return report;
}

SizingReport TwoPhasePlan(std::span<const ItemId> pilot_items,
                          ItemId domain_size, const TargetSpec& spec,
                          const PilotConfig& pilot_config,
                          std::int64_t num_clients, std::uint64_t seed,
                          std::span<const double> true_freqs) {
  if (pilot_items.empty()) throw ArgumentError("TwoPhasePlan: empty pilot");
  const HashFamily family(seed, pilot_config.rows, pilot_config.width,
                          domain_size);
  const SketchMatrix sketch = EncodeClients(family, 0, pilot_items);
  const FrequencyEstimate estimate = DecodeSingleRound(sketch, family, 0);
  return TwoPhasePlanFromEstimate(
      estimate, static_cast<std::int64_t>(pilot_items.size()), spec,
      pilot_config.k_top, num_clients, true_freqs);
}

}  // namespace fedfreq
