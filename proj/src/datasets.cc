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

#include "fedfreq/datasets.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <random>
#include <string>
#include <string_view>

#include "fedfreq/errors.h"

namespace fedfreq {
namespace {

constexpr std::uint64_t kZipfRole = 0x7a69706600000008ULL;
constexpr std::uint64_t kShuffleRole = 0x7368756600000009ULL;

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::int64_t ParseNonNegative(std::string_view field, long line) {
  field = Trim(field);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size() || value < 0) {
    throw ParseError(
        "expected a non-negative integer, got '" + std::string(field) + "'",
        line);
  }
  return value;
}

}  // namespace

std::vector<double> ZipfFrequencies(ItemId domain_size, double exponent) {
  if (domain_size < 1) throw ArgumentError("ZipfFrequencies: empty domain");
  if (!(exponent > 0.0)) {
    throw ArgumentError("ZipfFrequencies: exponent must be positive");
  }
  std::vector<double> f(domain_size);
  for (ItemId i = 0; i < domain_size; ++i) {
    f[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  // Sum from the small end for accuracy.
  const double total = std::accumulate(f.rbegin(), f.rend(), 0.0);
  for (double& v : f) v /= total;
  return f;
}

std::vector<ItemId> GenerateZipf(ItemId domain_size, std::int64_t num_clients,
                                 double exponent, std::uint64_t seed) {
  if (num_clients < 0) throw ArgumentError("GenerateZipf: negative count");
  const auto f = ZipfFrequencies(domain_size, exponent);
  std::vector<double> cdf(f.size());
  std::partial_sum(f.begin(), f.end(), cdf.begin());
  cdf.back() = 1.0;
  std::mt19937_64 rng(DeriveSeed(seed, kZipfRole));
  std::vector<ItemId> items(num_clients);
  for (auto& item : items) {
    const double u = UnitInterval(rng());
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    item = std::min<ItemId>(it - cdf.begin(), domain_size - 1);
  }
  return items;
}

std::vector<std::int64_t> RoundToCounts(std::span<const double> freqs,
                                        std::int64_t total) {
  if (freqs.empty()) throw ArgumentError("RoundToCounts: empty input");
  if (total < 0) throw ArgumentError("RoundToCounts: negative total");
  const double mass = std::accumulate(freqs.begin(), freqs.end(), 0.0);
  if (!(mass > 0.0)) throw ArgumentError("RoundToCounts: zero mass");
  std::vector<std::int64_t> counts(freqs.size());
  std::vector<std::pair<double, std::size_t>> remainders(freqs.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] < 0.0) throw ArgumentError("RoundToCounts: negative entry");
    const double exact = freqs[i] / mass * static_cast<double>(total);
    counts[i] = static_cast<std::int64_t>(std::floor(exact));
    remainders[i] = {exact - static_cast<double>(counts[i]), i};
    assigned += counts[i];
  }
  std::stable_sort(
      remainders.begin(), remainders.end(),
      [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) {
    ++counts[remainders[r % remainders.size()].second];
  }
  return counts;
}

RoundPlan MakeHomogeneousPlan(std::span<const double> freqs, int num_rounds,
                              std::int64_t clients_per_round) {
  if (num_rounds < 1 || clients_per_round < 1) {
    throw ArgumentError("MakeHomogeneousPlan: rounds and n must be >= 1");
  }
  const auto counts = RoundToCounts(freqs, clients_per_round);
  std::vector<ItemId> round;
  round.reserve(clients_per_round);
  for (ItemId i = 0; i < static_cast<ItemId>(counts.size()); ++i) {
    round.insert(round.end(), counts[i], i);
  }
  RoundPlan plan;
  plan.domain_size = static_cast<ItemId>(freqs.size());
  plan.rounds.assign(num_rounds, round);
  return plan;
}

void ShuffleItems(std::vector<ItemId>& items, std::uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, kShuffleRole));
  for (std::size_t i = items.size(); i > 1; --i) {
    // Multiply-shift keeps the draw platform independent.
    const auto j = static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng()) * i) >> 64);
    std::swap(items[i - 1], items[j]);
  }
}

ItemStream ParseItems(std::istream& in, std::optional<ItemId> domain_size) {
  if (domain_size && *domain_size < 1) {
    throw ArgumentError("ParseItems: declared domain size must be >= 1");
  }
  ItemStream stream;
  std::string raw;
  long line_no = 0;
  ItemId max_id = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t comma = line.find(',');
    const ItemId id = ParseNonNegative(line.substr(0, comma), line_no);
    std::int64_t count = 1;
    if (comma != std::string_view::npos) {
      count = ParseNonNegative(line.substr(comma + 1), line_no);
    }
    if (domain_size && id >= *domain_size) {
      throw ArgumentError("line " + std::to_string(line_no) + ": item " +
                          std::to_string(id) +
                          " outside declared domain of "
                          "size " +
                          std::to_string(*domain_size));
    }
    max_id = std::max(max_id, id);
    stream.items.insert(stream.items.end(), count, id);
  }
  if (stream.items.empty()) throw ParseError("no items in input", 0);
  stream.domain_size = domain_size ? *domain_size : max_id + 1;
  return stream;
}

ItemStream LoadItems(const std::string& path,
                     std::optional<ItemId> domain_size) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open item file '" + path + "'");
  return ParseItems(in, domain_size);
}

ExactFrequencies ExactOracle(const RoundPlan& plan) {
  plan.Validate();
  ExactFrequencies out;
  const double n = static_cast<double>(plan.clients_per_round());
  const double total = static_cast<double>(plan.total_clients());
  std::vector<std::int64_t> global(plan.domain_size, 0);
  for (int m = 0; m < plan.num_rounds(); ++m) {
    const auto counts = RoundHistogram(plan, m);
    FrequencyVector local(plan.domain_size);
    for (ItemId i = 0; i < plan.domain_size; ++i) {
      local[i] = static_cast<double>(counts[i]) / n;
      global[i] += counts[i];
    }
    out.per_round.push_back(std::move(local));
  }
  out.global.resize(plan.domain_size);
  for (ItemId i = 0; i < plan.domain_size; ++i) {
    out.global[i] = static_cast<double>(global[i]) / total;
  }
  return out;
}

std::vector<double> SortedDescending(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted;
}

}  // namespace fedfreq
