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

#include "fedfreq/hashing.h"

#include <string>

#include "fedfreq/errors.h"

namespace fedfreq {
namespace {

// Role salts keep the bucket, sign and round streams apart.
constexpr std::uint64_t kBucketRole = 0x6275636b65740001ULL;
constexpr std::uint64_t kSignRole = 0x7369676e00000002ULL;
constexpr std::uint64_t kFreshRole = 0x6672657368000003ULL;
constexpr std::uint64_t kTagRole = 0x7461670000000004ULL;

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t domain,
                         std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = Mix64(master ^ Mix64(domain));
  h = Mix64(h + 0x9e3779b97f4a7c15ULL * (a + 1));
  h = Mix64(h ^ (0xc2b2ae3d27d4eb4fULL * (b + 1)));
  return h;
}

std::string_view SignModeName(SignMode mode) {
  return mode == SignMode::kShared ? "shared" : "per-round";
}

HashFamily::HashFamily(std::uint64_t master_seed, int num_rows, int width,
                       ItemId domain_size, int num_rounds, SignMode mode)
    : master_seed_(master_seed),
      num_rows_(num_rows),
      width_(width),
      num_rounds_(num_rounds),
      domain_size_(domain_size),
      mode_(mode) {
  if (num_rows < 1 || width < 1 || domain_size < 1 || num_rounds < 1) {
    throw ArgumentError(
        "HashFamily: rows, width, domain size and rounds must "
        "be positive");
  }
  bucket_seeds_.reserve(num_rows);
  for (int l = 0; l < num_rows; ++l) {
    bucket_seeds_.push_back(DeriveSeed(master_seed, kBucketRole, l));
  }
  const int sign_slots = mode == SignMode::kShared ? 1 : num_rounds;
  sign_seeds_.reserve(static_cast<std::size_t>(sign_slots) * num_rows);
  for (int m = 0; m < sign_slots; ++m) {
    for (int l = 0; l < num_rows; ++l) {
      sign_seeds_.push_back(DeriveSeed(master_seed, kSignRole, l, m));
    }
  }
}

int HashFamily::Bucket(int row, ItemId item) const {
  if (row < 0 || row >= num_rows_) {
    throw ArgumentError("Bucket: row " + std::to_string(row) + " out of range");
  }
  if (item < 0 || item >= domain_size_) {
    throw ArgumentError("Bucket: item " + std::to_string(item) +
                        " out of range");
  }
  return BucketUnchecked(row, item);
}

int HashFamily::Sign(int row, int round, ItemId item) const {
  if (row < 0 || row >= num_rows_) {
    throw ArgumentError("Sign: row " + std::to_string(row) + " out of range");
  }
  if (round < 0 || round >= num_rounds_) {
    throw ArgumentError("Sign: round " + std::to_string(round) +
                        " out of range");
  }
  if (item < 0 || item >= domain_size_) {
    throw ArgumentError("Sign: item " + std::to_string(item) + " out of range");
  }
  return SignUnchecked(row, round, item);
}

std::uint64_t HashFamily::Tag(int round) const {
  const int slot = mode_ == SignMode::kShared ? 0 : round;
  std::uint64_t h = DeriveSeed(master_seed_, kTagRole, num_rows_, width_);
  h = Mix64(h ^ static_cast<std::uint64_t>(domain_size_));
  return Mix64(h + static_cast<std::uint64_t>(slot));
}

HashFamily HashFamily::WithWidth(int width) const {
  return HashFamily(master_seed_, num_rows_, width, domain_size_, num_rounds_,
                    mode_);
}

std::uint64_t FreshRoundSeed(std::uint64_t master_seed, int round) {
  return round == 0 ? master_seed : DeriveSeed(master_seed, kFreshRole, round);
}

std::vector<HashFamily> MakeFreshFamilies(std::uint64_t master_seed,
                                          int num_rows, int width,
                                          ItemId domain_size, int num_rounds) {
  if (num_rounds < 1) {
    throw ArgumentError("MakeFreshFamilies: need at least one round");
  }
  std::vector<HashFamily> families;
  families.reserve(num_rounds);
  for (int m = 0; m < num_rounds; ++m) {
    families.emplace_back(FreshRoundSeed(master_seed, m), num_rows, width,
                          domain_size);
  }
  return families;
}

}  // namespace fedfreq
