// Copyright 2026 The clustered-fu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfu/masking.h"

#include <sodium.h>

#include <algorithm>

#include "absl/strings/str_format.h"
#include "cfu/status.h"
#include "sodium_init.h"

namespace cfu {
namespace {

constexpr uint64_t kLow61 = (uint64_t{1} << 61) - 1;
constexpr uint64_t kLimbMask = (uint64_t{1} << 48) - 1;

void AppendLe(std::string& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

uint64_t ReadLe(absl::string_view in, size_t offset, int bytes) {
  uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<uint8_t>(in[offset + i]);
  }
  return v;
}

uint64_t SeedWord(const Seed& seed, int word) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | seed.bytes[8 * word + i];
  return v;
}

}  // namespace

Nonce NonceFromUint(uint64_t value) {
  Nonce nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = (value >> (8 * i)) & 0xff;
  return nonce;
}

absl::StatusOr<Seed> AgreeSeed(UserId i, UserId j, const Nonce& nonce) {
  if (i == j) {
    return MakeError(ErrorKind::kSelfPairing,
                     absl::StrFormat("user %d cannot pair with itself", i));
  }
  internal::EnsureSodium();
  const uint64_t lo = static_cast<uint32_t>(std::min(i, j));
  const uint64_t hi = static_cast<uint32_t>(std::max(i, j));
  std::array<unsigned char, 16> message{};
  for (int b = 0; b < 8; ++b) {
    message[b] = (lo >> (8 * b)) & 0xff;
    message[8 + b] = (hi >> (8 * b)) & 0xff;
  }
  Seed seed;
  crypto_generichash(seed.bytes.data(), seed.bytes.size(), message.data(),
                     message.size(), nonce.data(), nonce.size());
  return seed;
}

FieldVector ExpandMask(const Seed& seed, size_t dim) {
  internal::EnsureSodium();
  std::array<unsigned char, crypto_stream_chacha20_ietf_KEYBYTES> key{};
  crypto_generichash(key.data(), key.size(), seed.bytes.data(),
                     seed.bytes.size(), nullptr, 0);
  const std::array<unsigned char, crypto_stream_chacha20_ietf_NONCEBYTES>
      nonce{};

  constexpr size_t kBlockBytes = 64;
  std::array<unsigned char, kBlockBytes> zeros{};
  std::array<unsigned char, kBlockBytes> block{};
  FieldVector out;
  out.reserve(dim);
  uint32_t counter = 0;
  while (out.size() < dim) {
    crypto_stream_chacha20_ietf_xor_ic(block.data(), zeros.data(), kBlockBytes,
                                       nonce.data(), counter++, key.data());
    for (size_t w = 0; w < kBlockBytes / 8 && out.size() < dim; ++w) {
      uint64_t v = 0;
      for (int b = 7; b >= 0; --b) v = (v << 8) | block[8 * w + b];
      v &= kLow61;
      if (v == PrimeField::kMersenne61) continue;
      out.push_back({v});
    }
  }
  return out;
}

absl::StatusOr<FieldVector> MaskInput(
    const FieldVector& x, UserId self_id,
    const std::map<UserId, Seed>& neighbor_seeds) {
  if (neighbor_seeds.contains(self_id)) {
    return MakeError(ErrorKind::kSelfPairing,
                     absl::StrFormat("user %d listed as its own neighbor",
                                     self_id));
  }
  const PrimeField& field = kDefaultField;
  FieldVector y = x;
  for (const auto& [peer, seed] : neighbor_seeds) {
    const FieldVector mask = ExpandMask(seed, x.size());
    if (mask.size() != y.size()) {
      return MakeError(ErrorKind::kDimensionMismatch, "mask length differs");
    }
    if (peer > self_id) {
      field.AddInPlace(y, mask);
    } else {
      field.SubInPlace(y, mask);
    }
  }
  return y;
}

std::array<FieldElement, 3> SeedToLimbs(const Seed& seed) {
  const uint64_t w0 = SeedWord(seed, 0);
  const uint64_t w1 = SeedWord(seed, 1);
  return {FieldElement{w0 & kLimbMask},
          FieldElement{((w0 >> 48) | (w1 << 16)) & kLimbMask},
          FieldElement{w1 >> 32}};
}

Seed SeedFromLimbs(const std::array<FieldElement, 3>& limbs) {
  const uint64_t w0 = limbs[0].value | (limbs[1].value << 48);
  const uint64_t w1 = (limbs[1].value >> 16) | (limbs[2].value << 32);
  Seed seed;
  for (int i = 0; i < 8; ++i) {
    seed.bytes[i] = (w0 >> (8 * i)) & 0xff;
    seed.bytes[8 + i] = (w1 >> (8 * i)) & 0xff;
  }
  return seed;
}

std::string EncodeMaskVector(const MaskVector& v) {
  std::string out(v.seed.bytes.begin(), v.seed.bytes.end());
  AppendLe(out, v.elements.size(), 4);
  for (const FieldElement& e : v.elements) AppendLe(out, e.value, 8);
  return out;
}

absl::StatusOr<MaskVector> DecodeMaskVector(absl::string_view bytes) {
  if (bytes.size() < 20) {
    return MakeError(ErrorKind::kInvalidArgument, "mask vector truncated");
  }
  MaskVector v;
  std::copy_n(bytes.begin(), 16, v.seed.bytes.begin());
  const uint64_t dim = ReadLe(bytes, 16, 4);
  if (bytes.size() != 20 + 8 * dim) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrFormat("expected %d bytes, found %d",
                                     20 + 8 * dim, bytes.size()));
  }
  v.elements.reserve(dim);
  for (uint64_t i = 0; i < dim; ++i) {
    v.elements.push_back({ReadLe(bytes, 20 + 8 * i, 8)});
  }
  return v;
}

}  // namespace cfu
