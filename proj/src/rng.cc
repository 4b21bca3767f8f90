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

#include "cfu/rng.h"

#include <sodium.h>

#include <array>
#include <vector>

#include "sodium_init.h"

namespace cfu {

uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> path) {
  internal::EnsureSodium();
  std::vector<unsigned char> message;
  message.reserve(8 * (path.size() + 1));
  auto append = [&message](uint64_t v) {
    for (int i = 0; i < 8; ++i) message.push_back((v >> (8 * i)) & 0xff);
  };
  append(master);
  for (uint64_t p : path) append(p);
  static constexpr unsigned char kKey[] = "cfu.derive-seed.v1";
  std::array<unsigned char, 8> out{};
  crypto_generichash(out.data(), out.size(), message.data(), message.size(),
                     kKey, sizeof(kKey) - 1);
  uint64_t seed = 0;
  for (int i = 7; i >= 0; --i) seed = (seed << 8) | out[i];
  return seed;
}

}  // namespace cfu
