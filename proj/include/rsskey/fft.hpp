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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rsskey {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

namespace detail {

struct FftPlan {
    std::size_t n = 0;
    std::vector<std::uint32_t> bitrev; // index permutation
    std::vector<double> tw_re;         // exp(-2 pi i k / n), k < n/2
    std::vector<double> tw_im;

    explicit FftPlan(std::size_t size) : n(size) {
        bitrev.resize(n);
        std::uint32_t j = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            bitrev[i] = j;
            std::uint32_t bit = std::uint32_t(n >> 1);
            while (j & bit) {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
        }
        tw_re.resize(n / 2);
        tw_im.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double ang = -2.0 * std::numbers::pi * double(k) / double(n);
            tw_re[k] = std::cos(ang);
            tw_im[k] = std::sin(ang);
        }
    }
};

inline const FftPlan& fft_plan(std::size_t n) {
    thread_local std::map<std::size_t, FftPlan> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, FftPlan(n)).first;
    return it->second;
}

} // namespace detail

/// In-place complex FFT, radix-2 DIT. Size must be a power of two.
/// The inverse transform includes the 1/n scale.
inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a nonzero power of two");
    if (n == 1)
        return;
    const auto& plan = detail::fft_plan(n);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = plan.bitrev[i];
        if (i < j)
            std::swap(a[i], a[j]);
    }

    // Butterflies on explicit real/imag parts (keeps the inner loop branch free).
    auto* data = reinterpret_cast<double*>(a.data());
    const double sign = inverse ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            const double* twr = plan.tw_re.data();
            const double* twi = plan.tw_im.data();
            for (std::size_t k = 0; k < half; ++k) {
                const double wr = twr[k * step];
                const double wi = sign * twi[k * step];
                double* p = data + 2 * (base + k);
                double* q = data + 2 * (base + k + half);
                const double vr = q[0] * wr - q[1] * wi;
                const double vi = q[0] * wi + q[1] * wr;
                const double ur = p[0];
                const double ui = p[1];
                p[0] = ur + vr;
                p[1] = ui + vi;
                q[0] = ur - vr;
                q[1] = ui - vi;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / double(n);
        for (auto& z : a)
            z *= scale;
    }
}

inline std::vector<std::complex<double>> fft_copy(const std::vector<std::complex<double>>& a,
                                                  bool inverse = false) {
    auto out = a;
    fft(out, inverse);
    return out;
}

} // namespace rsskey
