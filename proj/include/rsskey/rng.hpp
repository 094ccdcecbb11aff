// SPDX-License-Identifier: Apache-2.0
//
// rsskey - secret key generation rate bounds from RSS over LoS multipath channels
// Copyright (C) 2026 the rsskey authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace rsskey {

/// splitmix64 finalizer; used as the mixing step of stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Absorb one tag into a derivation state. Order sensitive.
constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t tag) noexcept {
    return mix64(h ^ (tag + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Fold an arbitrary tag sequence into one 64-bit stream key.
/// Keys derived from distinct tag sequences index independent streams,
/// so workers can be handed non-overlapping sub-streams by construction.
constexpr std::uint64_t derive_key(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t t : tags)
        h = absorb(h, t);
    return h;
}

/// xoshiro256++ (Blackman & Vigna). Small, fast, and plenty for Monte Carlo.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        // Seed the full state through splitmix64 as recommended upstream.
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix64(s);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~std::uint64_t{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return double((*this)() >> 11) * 0x1.0p-53; }

    /// Standard normal via the Marsaglia polar method (pairs cached).
    double normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    /// Complex Gaussian with the given per-component standard deviation.
    std::complex<double> cnormal(double sigma) noexcept {
        const double re = normal() * sigma;
        const double im = normal() * sigma;
        return {re, im};
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Generator for a derived sub-stream.
inline Xoshiro256pp derive_stream(std::uint64_t master,
                                  std::initializer_list<std::uint64_t> tags) noexcept {
    return Xoshiro256pp(derive_key(master, tags));
}

} // namespace rsskey
