/*
   Copyright 2026 The mcd2d Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mcd2d {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
/// (counter, key) always maps to the same 128 output bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/// What a substream is used for; part of the counter so streams never overlap.
enum class StreamPurpose : std::uint32_t {
    tx_field = 1,
    bs_field = 2,
    receivers = 3,
    signal_fading = 4,
    interferer_fading = 5,
    downlink_signal = 6,
    downlink_fading = 7,
    bs_location = 8,
    synthetic = 15,
};

/// Packs (purpose, slot, annulus) into one counter word.
inline std::uint32_t stream_tag(StreamPurpose purpose, std::uint32_t slot = 0,
                                std::uint32_t annulus = 0)
{
    return (static_cast<std::uint32_t>(purpose) << 28) | ((slot & 0xFFFu) << 16) |
           (annulus & 0xFFFFu);
}

/// Sequential 64-bit generator over the counter space (trial, tag, element, k),
/// k = 0, 1, 2, ... Satisfies UniformRandomBitGenerator.
class Substream {
public:
    using result_type = std::uint64_t;

    Substream(std::uint64_t seed, std::uint32_t trial, std::uint32_t tag, std::uint32_t element)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{trial, tag, element, 0}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (used_ == 2 || used_ < 0) {
            block_ = Philox4x32::block(ctr_, key_);
            ++ctr_[3];
            used_ = 0;
        }
        const int i = 2 * used_++;
        return (std::uint64_t{block_[i]} << 32) | block_[i + 1];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Exp(1) variate.
    double exponential()
    {
        // midpoint of one of 2^53 cells, strictly inside (0, 1)
        const double u = (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
        return -std::log(u);
    }

    /// n Exp(1) variates from 32-bit uniforms, four per block. Starts a fresh block.
    void fill_exponential(double* out, std::size_t n)
    {
        std::size_t i = 0;
        while (i < n) {
            const auto b = Philox4x32::block(ctr_, key_);
            ++ctr_[3];
            for (int k = 0; k < 4 && i < n; ++k, ++i)
                out[i] = -std::log((static_cast<double>(b[k]) + 0.5) * 0x1.0p-32);
        }
        used_ = -1;
    }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_ = -1;
};

} // namespace mcd2d
