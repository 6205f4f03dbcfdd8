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

#include "fedfreq/securesum.h"

#include <bit>
#include <limits>
#include <string>

#include "fedfreq/errors.h"

namespace fedfreq {
namespace {

constexpr std::uint64_t kMaskRole = 0x6d61736b00000005ULL;
constexpr int kMaxBits = 62;

std::uint64_t EdgeSeed(std::uint64_t seed, int round, std::int64_t edge) {
  return DeriveSeed(seed, kMaskRole, static_cast<std::uint64_t>(round),
                    static_cast<std::uint64_t>(edge));
}

std::uint64_t Pad(std::uint64_t edge_seed, std::size_t entry,
                  std::uint64_t mask_bits) {
  return Mix64(edge_seed + 0x9e3779b97f4a7c15ULL * (entry + 1)) & mask_bits;
}

}  // namespace

std::uint64_t GroupParams::RequiredModulus(std::int64_t max_clients,
                                           std::int64_t max_abs_entry) {
  if (max_clients < 1 || max_abs_entry < 1) {
    throw ArgumentError(
        "GroupParams: client count and entry bound must be "
        "positive");
  }
  const auto n = static_cast<unsigned __int128>(max_clients);
  const auto v = static_cast<unsigned __int128>(max_abs_entry);
  const unsigned __int128 bound = 2 * n * v + 2;
  if (bound > (static_cast<unsigned __int128>(1) << kMaxBits)) {
    throw OverflowError("GroupParams: required modulus exceeds 2^62");
  }
  return static_cast<std::uint64_t>(bound);
}

GroupParams GroupParams::ForClients(std::int64_t max_clients,
                                    std::int64_t max_abs_entry) {
  const std::uint64_t bound = RequiredModulus(max_clients, max_abs_entry);
  const int bits = std::bit_width(bound - 1);
  return GroupParams(bits, max_clients, max_abs_entry);
}

GroupParams GroupParams::WithBits(int bits, std::int64_t max_clients,
                                  std::int64_t max_abs_entry) {
  if (bits < 1 || bits > kMaxBits) {
    throw ArgumentError("GroupParams: group bits must lie in [1, 62]");
  }
  const std::uint64_t bound = RequiredModulus(max_clients, max_abs_entry);
  if ((std::uint64_t{1} << bits) < bound) {
    throw OverflowError("GroupParams: 2^" + std::to_string(bits) +
                        " is below the required modulus " +
                        std::to_string(bound) + " for " +
                        std::to_string(max_clients) + " clients");
  }
  return GroupParams(bits, max_clients, max_abs_entry);
}

std::int64_t GroupParams::Center(std::uint64_t residue) const {
  const std::uint64_t q = modulus();
  residue &= q - 1;
  if (residue > q / 2) {
    return -static_cast<std::int64_t>(q - residue);
  }
  return static_cast<std::int64_t>(residue);
}

std::vector<std::uint64_t> ClientMask(const GroupParams& params,
                                      std::uint64_t seed, int round,
                                      std::int64_t client,
                                      std::int64_t num_clients,
                                      std::size_t num_entries) {
  if (client < 0 || client >= num_clients) {
    throw ArgumentError("ClientMask: client index out of range");
  }
  const std::uint64_t bits = params.modulus() - 1;
  const std::uint64_t out_edge = EdgeSeed(seed, round, client);
  const std::uint64_t in_edge =
      EdgeSeed(seed, round, (client + num_clients - 1) % num_clients);
  std::vector<std::uint64_t> mask(num_entries);
  for (std::size_t e = 0; e < num_entries; ++e) {
    mask[e] = (Pad(out_edge, e, bits) - Pad(in_edge, e, bits)) & bits;
  }
  return mask;
}

std::vector<MaskedMessage> MaskClients(std::span<const SketchMatrix> messages,
                                       const GroupParams& params,
                                       std::uint64_t seed, int round) {
  const auto n = static_cast<std::int64_t>(messages.size());
  if (n == 0) return {};
  if (n > params.max_clients()) {
    throw OverflowError("MaskClients: " + std::to_string(n) +
                        " clients exceed the group bound of " +
                        std::to_string(params.max_clients()));
  }
  const SketchMatrix& first = messages.front();
  const std::uint64_t bits = params.modulus() - 1;
  std::vector<MaskedMessage> out;
  out.reserve(messages.size());
  for (std::int64_t t = 0; t < n; ++t) {
    const SketchMatrix& msg = messages[t];
    if (!msg.Compatible(first)) {
      throw ArgumentError("MaskClients: messages differ in shape or family");
    }
    const auto counts = msg.counts();
    const auto mask = ClientMask(params, seed, round, t, n, counts.size());
    MaskedMessage masked{msg.rows(), msg.width(), msg.seed(), msg.family_tag(),
                         t,          round,       {}};
    masked.entries.resize(counts.size());
    for (std::size_t e = 0; e < counts.size(); ++e) {
      const std::int64_t v = counts[e];
      if (v > params.max_abs_entry() || v < -params.max_abs_entry()) {
        throw OverflowError("MaskClients: entry " + std::to_string(v) +
                            " exceeds the bound " +
                            std::to_string(params.max_abs_entry()));
      }
      masked.entries[e] = (params.Embed(v) + mask[e]) & bits;
    }
    out.push_back(std::move(masked));
  }
  return out;
}

SketchMatrix SecureAggregate(std::span<const MaskedMessage> masked,
                             const GroupParams& params,
                             std::int64_t expected_clients) {
  if (expected_clients < 1) {
    throw ArgumentError("SecureAggregate: expected client count must be >= 1");
  }
  if (static_cast<std::int64_t>(masked.size()) != expected_clients) {
    throw ProtocolError("SecureAggregate: received " +
                        std::to_string(masked.size()) + " of " +
                        std::to_string(expected_clients) +
                        " masked messages; dropout is not supported");
  }
  const MaskedMessage& first = masked.front();
  std::vector<bool> seen(expected_clients, false);
  const std::uint64_t bits = params.modulus() - 1;
  std::vector<std::uint64_t> sum(first.entries.size(), 0);
  for (const MaskedMessage& msg : masked) {
    if (msg.rows != first.rows || msg.width != first.width ||
        msg.family_tag != first.family_tag || msg.round_id != first.round_id ||
        msg.entries.size() != sum.size()) {
      throw ProtocolError("SecureAggregate: inconsistent masked messages");
    }
    if (msg.client_id < 0 || msg.client_id >= expected_clients ||
        seen[msg.client_id]) {
      throw ProtocolError("SecureAggregate: missing or duplicated client " +
                          std::to_string(msg.client_id));
    }
    seen[msg.client_id] = true;
    for (std::size_t e = 0; e < sum.size(); ++e) {
      sum[e] = (sum[e] + msg.entries[e]) & bits;
    }
  }
  SketchMatrix total(first.rows, first.width, first.seed, first.family_tag);
  auto counts = total.mutable_counts();
  for (std::size_t e = 0; e < sum.size(); ++e)
    counts[e] = params.Center(sum[e]);
  total.set_scale(expected_clients);
  return total;
}

SketchMatrix SecureRoundAggregate(const HashFamily& family, int round,
                                  std::span<const ItemId> items,
                                  const GroupParams& params,
                                  std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(items.size());
  if (n == 0) throw ArgumentError("SecureRoundAggregate: empty round");
  if (n > params.max_clients() || params.max_abs_entry() < 1) {
    throw OverflowError("SecureRoundAggregate: " + std::to_string(n) +
                        " clients exceed the group bound");
  }
  const int rows = family.num_rows();
  const int width = family.width();
  const std::size_t entries = static_cast<std::size_t>(rows) * width;
  const std::uint64_t bits = params.modulus() - 1;
  std::vector<std::uint64_t> sum(entries, 0);
  std::vector<std::uint64_t> message(entries);
  for (std::int64_t t = 0; t < n; ++t) {
    const auto mask = ClientMask(params, seed, round, t, n, entries);
    std::fill(message.begin(), message.end(), 0);
    const ItemId item = items[t];
    if (item < 0 || item >= family.domain_size()) {
      throw ArgumentError("SecureRoundAggregate: item outside domain");
    }
    for (int l = 0; l < rows; ++l) {
      message[static_cast<std::size_t>(l) * width +
              family.BucketUnchecked(l, item)] =
          params.Embed(family.SignUnchecked(l, round, item));
    }
    for (std::size_t e = 0; e < entries; ++e) {
      sum[e] = (sum[e] + ((message[e] + mask[e]) & bits)) & bits;
    }
  }
  SketchMatrix total(rows, width, family.master_seed(), family.Tag(round));
  auto counts = total.mutable_counts();
  for (std::size_t e = 0; e < entries; ++e) counts[e] = params.Center(sum[e]);
  total.set_scale(n);
  return total;
}

std::int64_t CommCostBits(int rows, int width, const GroupParams& params) {
  if (rows < 1 || width < 1) {
    throw ArgumentError("CommCostBits: rows and width must be positive");
  }
  return static_cast<std::int64_t>(rows) * width * params.bits();
}

std::int64_t OneHotCostBits(ItemId domain_size, const GroupParams& params) {
  if (domain_size < 1) throw ArgumentError("OneHotCostBits: empty domain");
  return domain_size * params.bits();
}

}  // namespace fedfreq
