//
// Copyright 2026 The simplexcert Authors
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

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Stream derivation: a 64-bit run seed becomes the 64-bit key
// (low word, high word). The 128-bit counter is
//   (block index low, block index high, stream id, phase id)
// where the stream id is the sample index and the phase id separates
// independent draw sets of one sample (for example selection versus
// estimation draws). Every sample therefore owns a disjoint stream that
// does not depend on how samples are scheduled across threads.

#ifndef SIMPLEXCERT_PHILOX_HPP_
#define SIMPLEXCERT_PHILOX_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace simplexcert {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint32_t stream, std::uint32_t phase = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        phase_(phase) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (used_ == 4) {
      buffer_ = generate(
          Block{static_cast<std::uint32_t>(block_),
                static_cast<std::uint32_t>(block_ >> 32), stream_, phase_},
          key_);
      ++block_;
      used_ = 0;
    }
    return buffer_[used_++];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  // Ten rounds of the Philox bijection.
  static Block generate(Block counter, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                 static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

 private:
  Key key_;
  std::uint32_t stream_;
  std::uint32_t phase_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
};

}  // namespace simplexcert

#endif  // SIMPLEXCERT_PHILOX_HPP_
