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

#ifndef CFU_RNG_H_
#define CFU_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfu {

// All simulation randomness flows through explicitly seeded engines; nothing
// reads the wall clock.
using Rng = std::mt19937_64;

// Hashes (master, path...) into a 64-bit seed with BLAKE2b. Streams derived
// from distinct paths are independent, and adding or removing one consumer
// (a user, a trial) never perturbs the streams of the others.
uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> path);

inline Rng MakeRng(uint64_t master, std::initializer_list<uint64_t> path) {
  return Rng(DeriveSeed(master, path));
}

// Uniform integer in [0, bound).
inline uint64_t UniformBelow(Rng& rng, uint64_t bound) {
  return std::uniform_int_distribution<uint64_t>(0, bound - 1)(rng);
}

}  // namespace cfu

#endif  // CFU_RNG_H_
