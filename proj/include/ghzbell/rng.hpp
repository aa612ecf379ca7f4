// Copyright 2026 The ghzbell Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ghzbell {

/// Philox4x32-10 block function (Salmon et al., Random123).
///
/// Stateless: the output depends only on (counter, key), so any block can be
/// recomputed independently of the others.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto lo0 = static_cast<std::uint32_t>(p0);
            auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Identifies one independent random stream: (seed, stream, batch).
///
/// The seed becomes the Philox key; stream and batch occupy the upper counter
/// words and the lower two words count blocks within the stream, so distinct
/// keys never share a counter value.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
    std::uint32_t batch = 0;
};

/// Sequential generator over one Philox stream. Satisfies
/// UniformRandomBitGenerator.
class PhiloxStream {
   public:
    using result_type = std::uint32_t;

    explicit PhiloxStream(StreamKey key)
        : key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)},
          stream_(key.stream),
          batch_(key.batch) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        if (used_ == 4) {
            refill();
        }
        return buffer_[used_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        std::uint64_t a = (*this)() >> 5;
        std::uint64_t b = (*this)() >> 6;
        return static_cast<double>((a << 26) | b) * 0x1.0p-53;
    }

   private:
    void refill() {
        Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), stream_,
                                batch_};
        buffer_ = Philox4x32::block(ctr, key_);
        ++block_;
        used_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_;
    std::uint32_t batch_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
};

}  // namespace ghzbell
