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

#ifndef FEDFREQ_SECURESUM_H_
#define FEDFREQ_SECURESUM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"

namespace fedfreq {

// The additive group Z_q used to mask client messages, q a power of two.
// Signed values embed through centered representatives in (-q/2, q/2].
class GroupParams {
 public:
  // Smallest power of two q >= 2 * max_clients * max_abs_entry + 2.
  static GroupParams ForClients(std::int64_t max_clients,
                                std::int64_t max_abs_entry = 1);
  // q = 2^bits; throws OverflowError when q is below the bound above.
  static GroupParams WithBits(int bits, std::int64_t max_clients,
                              std::int64_t max_abs_entry = 1);

  std::uint64_t modulus() const { return std::uint64_t{1} << bits_; }
  int bits() const { return bits_; }
  std::int64_t max_clients() const { return max_clients_; }
  std::int64_t max_abs_entry() const { return max_abs_entry_; }

  std::uint64_t Embed(std::int64_t value) const {
    return static_cast<std::uint64_t>(value) & (modulus() - 1);
  }
  std::int64_t Center(std::uint64_t residue) const;

  // Lower bound on q implied by the overflow rule.
  static std::uint64_t RequiredModulus(std::int64_t max_clients,
                                       std::int64_t max_abs_entry);

 private:
  GroupParams(int bits, std::int64_t max_clients, std::int64_t max_abs_entry)
      : bits_(bits), max_clients_(max_clients), max_abs_entry_(max_abs_entry) {}

  int bits_;
  std::int64_t max_clients_;
  std::int64_t max_abs_entry_;
};

struct MaskedMessage {
  int rows = 0;
  int width = 0;
  std::uint64_t seed = 0;
  std::uint64_t family_tag = 0;
  std::int64_t client_id = 0;
  int round_id = 0;
  std::vector<std::uint64_t> entries;  // residues in [0, q), row-major
};

// Zero-sum mask of client `client` among `num_clients` in `round`, entry by
// entry. Clients sit on a ring; client t adds the pad of edge (t, t+1) and
// subtracts the pad of edge (t-1, t), so the masks of a complete round sum
// to zero mod q while each single mask is uniform on the group (n >= 2).
std::vector<std::uint64_t> ClientMask(const GroupParams& params,
                                      std::uint64_t seed, int round,
                                      std::int64_t client,
                                      std::int64_t num_clients,
                                      std::size_t num_entries);

// Masks one round of client messages. Throws OverflowError when a message
// entry exceeds max_abs_entry or there are more clients than max_clients.
std::vector<MaskedMessage> MaskClients(std::span<const SketchMatrix> messages,
                                       const GroupParams& params,
                                       std::uint64_t seed, int round = 0);

// Sums the complete masked set of one round and recenters to signed counts.
// Throws ProtocolError when clients are missing, duplicated or disagree on
// shape or round.
SketchMatrix SecureAggregate(std::span<const MaskedMessage> masked,
                             const GroupParams& params,
                             std::int64_t expected_clients);

// Streams one round through encode -> mask -> modular sum without holding all
// masked messages, returning the recentered aggregate. Equal to
// EncodeClients(family, round, items).
SketchMatrix SecureRoundAggregate(const HashFamily& family, int round,
                                  std::span<const ItemId> items,
                                  const GroupParams& params,
                                  std::uint64_t seed);

// Per-client upload of an L x W sketch: L * W * log2(q) bits.
std::int64_t CommCostBits(int rows, int width, const GroupParams& params);

// Per-client upload of a one-hot vector of length d through the same group.
std::int64_t OneHotCostBits(ItemId domain_size, const GroupParams& params);

}  // namespace fedfreq

#endif  // FEDFREQ_SECURESUM_H_
