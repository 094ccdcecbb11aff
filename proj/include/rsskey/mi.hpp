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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsskey/rng.hpp"
#include "rsskey/special.hpp"

namespace rsskey {

/// MI estimate plus estimator metadata. Reported nats/bits are clamped at
/// zero; the raw value is kept for diagnostics.
struct MiEstimate {
    double nats = 0.0;
    double bits = 0.0;
    double raw_nats = 0.0;
    int k = 0;
    bool lnc = false;
    double alpha = 0.0;
    std::size_t n_samples = 0;
    bool degenerate = false; // constant input vector
};

/// Closed-form MI of a bivariate Gaussian with correlation rho, in nats.
inline double gaussian_mi_oracle(double rho) {
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("gaussian_mi_oracle: |rho| must be < 1");
    return -0.5 * std::log(1.0 - rho * rho);
}

namespace detail {

inline double sample_stddev(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= double(v.size());
    double var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    return std::sqrt(var / double(v.size()));
}

/// Content hash of the raw sample bytes. Jitter streams keyed this way make
/// mi(a, b) and mi(b, a) bit-identical: each vector carries its own stream
/// no matter the argument position.
inline std::uint64_t content_key(std::span<const double> v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double x : v) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        h ^= bits;
        h *= 0x100000001b3ULL;
    }
    return absorb(h, v.size());
}

/// Tie-breaking jitter, 1e-10 of the sample deviation.
inline std::vector<double> jittered(std::span<const double> v, std::uint64_t salt) {
    const double scale = 1e-10 * sample_stddev(v);
    auto rng = derive_stream(content_key(v), {salt});
    std::vector<double> out(v.begin(), v.end());
    if (scale > 0.0)
        for (double& x : out)
            x += scale * (rng.uniform01() - 0.5);
    return out;
}

/// Count of samples in the open interval (x - eps, x + eps) of a sorted
/// array, self included.
inline std::size_t count_within(const std::vector<double>& sorted, double x, double eps) {
    const auto lo = std::upper_bound(sorted.begin(), sorted.end(), x - eps);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), x + eps);
    return std::size_t(hi - lo);
}

struct Neighborhood {
    double eps = 0.0;                // Chebyshev distance of the k-th neighbor
    std::vector<std::uint32_t> ids;  // the k neighbor indices
};

/// k nearest neighbors of point i in the jointly jittered sample under the
/// max-norm, by linear scan with a small insertion buffer.
inline Neighborhood knn_maxnorm(const std::vector<double>& x, const std::vector<double>& y,
                                std::size_t i, int k) {
    const std::size_t n = x.size();
    std::vector<double> dist(std::size_t(k), std::numeric_limits<double>::infinity());
    std::vector<std::uint32_t> ids(std::size_t(k), 0);
    double worst = dist.back();
    const double xi = x[i], yi = y[i];
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i)
            continue;
        const double d = std::max(std::abs(x[j] - xi), std::abs(y[j] - yi));
        if (d >= worst)
            continue;
        std::size_t pos = std::size_t(k) - 1;
        while (pos > 0 && dist[pos - 1] > d) {
            dist[pos] = dist[pos - 1];
            ids[pos] = ids[pos - 1];
            --pos;
        }
        dist[pos] = d;
        ids[pos] = std::uint32_t(j);
        worst = dist.back();
    }
    return {dist.back(), std::move(ids)};
}

/// log of the ratio between the max-norm box volume and the PCA-aligned
/// bounding box of {point, neighbors}; positive when the neighborhood is
/// squeezed onto a lower-dimensional structure.
inline double lnc_log_volume_ratio(const std::vector<double>& x, const std::vector<double>& y,
                                   std::size_t i, const Neighborhood& nb) {
    const std::size_t m = nb.ids.size() + 1;
    double mx = x[i], my = y[i];
    for (auto j : nb.ids) {
        mx += x[j];
        my += y[j];
    }
    mx /= double(m);
    my /= double(m);

    double cxx = 0.0, cyy = 0.0, cxy = 0.0;
    auto accumulate = [&](double px, double py) {
        const double dx = px - mx, dy = py - my;
        cxx += dx * dx;
        cyy += dy * dy;
        cxy += dx * dy;
    };
    accumulate(x[i], y[i]);
    for (auto j : nb.ids)
        accumulate(x[j], y[j]);

    const double theta = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
    const double c = std::cos(theta), s = std::sin(theta);
    double wu = 0.0, wv = 0.0;
    auto extent = [&](double px, double py) {
        const double dx = px - mx, dy = py - my;
        wu = std::max(wu, std::abs(c * dx + s * dy));
        wv = std::max(wv, std::abs(-s * dx + c * dy));
    };
    extent(x[i], y[i]);
    for (auto j : nb.ids)
        extent(x[j], y[j]);

    const double floor_w = 1e-12 * nb.eps;
    wu = std::max(wu, floor_w);
    wv = std::max(wv, floor_w);
    // V = (2 eps)^2, Vbar = (2 wu)(2 wv)
    return 2.0 * std::log(nb.eps) - std::log(wu) - std::log(wv);
}

inline MiEstimate mi_knn_core(std::span<const double> a, std::span<const double> b, int k,
                              bool lnc, double alpha) {
    if (a.size() != b.size())
        throw std::invalid_argument("mi: sample vectors must have equal length");
    const std::size_t n = a.size();
    if (k < 1)
        throw std::invalid_argument("mi: k must be >= 1");
    if (n <= std::size_t(k))
        throw std::invalid_argument("mi: need more samples than neighbors");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw std::invalid_argument("mi: samples must be finite");

    MiEstimate est;
    est.k = k;
    est.lnc = lnc;
    est.alpha = lnc ? alpha : 0.0;
    est.n_samples = n;

    if (sample_stddev(a) == 0.0 || sample_stddev(b) == 0.0) {
        est.degenerate = true;
        return est;
    }

    const std::vector<double> x = jittered(a, 0xA57Au);
    const std::vector<double> y = jittered(b, 0xA57Au);
    std::vector<double> xs = x, ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());

    double acc_psi = 0.0;
    double acc_corr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Neighborhood nb = knn_maxnorm(x, y, i, k);
        const std::size_t nx = count_within(xs, x[i], nb.eps) - 1;
        const std::size_t ny = count_within(ys, y[i], nb.eps) - 1;
        acc_psi += digamma(double(nx + 1)) + digamma(double(ny + 1));
        if (lnc) {
            const double log_ratio = lnc_log_volume_ratio(x, y, i, nb);
            // Correct only when Vbar/V drops below alpha.
            if (log_ratio > -std::log(alpha))
                acc_corr += log_ratio;
        }
    }

    const double raw = digamma(double(k)) + digamma(double(n)) - acc_psi / double(n) +
                       acc_corr / double(n);
    est.raw_nats = raw;
    est.nats = std::max(0.0, raw);
    est.bits = est.nats / std::numbers::ln2;
    return est;
}

} // namespace detail

/// Kraskov k-nearest-neighbor MI estimate (algorithm 1, max-norm).
inline MiEstimate mi_ksg(std::span<const double> a, std::span<const double> b, int k = 5) {
    return detail::mi_knn_core(a, b, k, false, 0.0);
}

/// KSG with the local non-uniformity correction: neighborhoods whose
/// PCA-aligned bounding box shrinks below alpha times the max-norm box get
/// the volume-ratio correction. alpha -> 0 disables every correction and
/// reproduces mi_ksg bit for bit.
inline MiEstimate mi_lnc(std::span<const double> a, std::span<const double> b, int k = 5,
                         double alpha = 0.25) {
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::invalid_argument("mi_lnc: alpha must be in (0, 1)");
    return detail::mi_knn_core(a, b, k, true, alpha);
}

} // namespace rsskey
