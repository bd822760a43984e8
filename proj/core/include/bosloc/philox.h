// Copyright 2026 The bosloc Authors
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

#ifndef BOSLOC_PHILOX_H_
#define BOSLOC_PHILOX_H_

#include <array>
#include <cstdint>

namespace bosloc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block of
// four 32-bit words is a pure function of (counter, key), so any random
// draw can be regenerated from its coordinates without replaying a stream.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);

  static Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32)};
  }
};

// Uniform double in [0, 1) built from the first 53 bits of a Philox block.
double uniform_from_block(const Philox4x32::Counter& block);

// Random stream keyed by (seed, stream id): consecutive calls advance an
// internal counter. Deterministic and cheap to copy.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_(Philox4x32::key_from_seed(seed)), stream_(stream) {}

  double uniform();
  double normal();

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
};

}  // namespace bosloc

#endif  // BOSLOC_PHILOX_H_
