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

#ifndef FEDFREQ_HASHING_H_
#define FEDFREQ_HASHING_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace fedfreq {

using ItemId = std::int64_t;

// 64-bit avalanche mixer (the splitmix64 finalizer).
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent-looking sub-seed from `master` for the given
// (domain, a, b) coordinates. Distinct coordinates give distinct streams.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t domain,
                         std::uint64_t a = 0, std::uint64_t b = 0);

// Uniform double in [0, 1) from the top 53 bits of `bits`.
inline double UnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// How sign hashes relate across rounds.
enum class SignMode {
  // sigma_l is the same function in every round (single-round, shared).
  kShared,
  // sigma_l^(m) is drawn independently per round (hybrid).
  kPerRound,
};

std::string_view SignModeName(SignMode mode);

// Seeded bucket hashes h_l : [d] -> [W] and sign hashes
// sigma_l^(m) : [d] -> {+1, -1} for l < L and m < M.
//
// Bucket hashes never depend on the round. In kPerRound mode each
// (row, round) pair owns a sign sub-seed; in kShared mode every round reuses
// the round-0 sub-seed, so round 0 signs coincide across modes for equal
// seeds. Immutable after construction.
class HashFamily {
 public:
  HashFamily(std::uint64_t master_seed, int num_rows, int width,
             ItemId domain_size, int num_rounds = 1,
             SignMode mode = SignMode::kShared);

  // Checked accessors; throw ArgumentError on out-of-range indices.
  int Bucket(int row, ItemId item) const;
  int Sign(int row, int round, ItemId item) const;

  // Unchecked variants for hot loops. Callers guarantee the ranges.
  int BucketUnchecked(int row, ItemId item) const {
    return static_cast<int>(
        Mix64(bucket_seeds_[row] +
              static_cast<std::uint64_t>(item) * kItemStride) %
        static_cast<std::uint64_t>(width_));
  }
  int SignUnchecked(int row, int round, ItemId item) const {
    const int slot = mode_ == SignMode::kShared ? 0 : round;
    const std::uint64_t h =
        Mix64(sign_seeds_[static_cast<std::size_t>(slot) * num_rows_ + row] +
              static_cast<std::uint64_t>(item) * kItemStride);
    return (h >> 63) != 0 ? -1 : 1;
  }

  // Identity of the sketches this family produces in `round`. Sketches with
  // equal tags may be added together; in kShared mode the tag ignores the
  // round.
  std::uint64_t Tag(int round) const;

  std::uint64_t master_seed() const { return master_seed_; }
  int num_rows() const { return num_rows_; }
  int width() const { return width_; }
  int num_rounds() const { return num_rounds_; }
  ItemId domain_size() const { return domain_size_; }
  SignMode mode() const { return mode_; }

  // A copy with a different width but the same seed schedule.
  HashFamily WithWidth(int width) const;

  bool operator==(const HashFamily&) const = default;

 private:
  static constexpr std::uint64_t kItemStride = 0x9e3779b97f4a7c15ULL;

  std::uint64_t master_seed_;
  int num_rows_;
  int width_;
  int num_rounds_;
  ItemId domain_size_;
  SignMode mode_;
  std::vector<std::uint64_t> bucket_seeds_;
  std::vector<std::uint64_t> sign_seeds_;
};

// Master seed of round `round` in the fresh design. Round 0 keeps the
// master seed, so a one-round fresh run equals the single-round sketch.
std::uint64_t FreshRoundSeed(std::uint64_t master_seed, int round);

// M single-round families with independent buckets and signs, one per round.
std::vector<HashFamily> MakeFreshFamilies(std::uint64_t master_seed,
                                          int num_rows, int width,
                                          ItemId domain_size, int num_rounds);

}  // namespace fedfreq

#endif  // FEDFREQ_HASHING_H_
