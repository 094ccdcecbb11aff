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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rsskey/grid_pdf.hpp"
#include "rsskey/special.hpp"

namespace rsskey {

// Closed-form / semi-analytic RSS power distributions for the three
// multipath-resolution regimes, the frame-noise power, and their numerical
// convolution into the total received power distribution.

/// Default tabulation: 2^14 nodes covering [0, mean + 12 stddev].
struct GridSpec {
    std::size_t n = std::size_t(1) << 14;
    double span_stddevs = 12.0;
};

namespace detail {

inline GridPdf tabulate(const std::function<double(double)>& pdf, double mean, double stddev,
                        const GridSpec& spec) {
    const double xmax = mean + spec.span_stddevs * stddev;
    const double dx = xmax / double(spec.n - 1);
    return make_grid_pdf(pdf, 0.0, dx, spec.n);
}

} // namespace detail

inline GridPdf gamma_grid_pdf(double shape, double scale, const GridSpec& spec = {}) {
    const double mean = shape * scale;
    const double stddev = std::sqrt(shape) * scale;
    return detail::tabulate([=](double x) { return gamma_pdf(x, shape, scale); }, mean, stddev,
                            spec);
}

/// Noncentral chi-square scaled by a physical power factor: density of
/// scale * X with X ~ chi^2(dof, lambda).
inline GridPdf scaled_ncx2_grid_pdf(double dof, double lambda, double scale,
                                    const GridSpec& spec = {}) {
    if (!(scale > 0.0))
        throw std::invalid_argument("scaled_ncx2_grid_pdf: scale must be positive");
    const double mean = scale * (dof + lambda);
    const double stddev = scale * std::sqrt(2.0 * dof + 4.0 * lambda);
    return detail::tabulate(
        [=](double x) { return ncx2_pdf(x / scale, dof, lambda) / scale; }, mean, stddev, spec);
}

/// Case 1: delay spread below the signal period, every path lands in one
/// delay bin and amplitudes combine coherently. Normalized power
/// Z^2/(L sigma^2) ~ chi^2(2, nu^2/(L sigma^2)).
inline GridPdf chan_pdf_unresolved(std::size_t L, double nu, double sigma, bool normalized = false,
                                   const GridSpec& spec = {}) {
    if (L == 0 || !(sigma > 0.0) || nu < 0.0)
        throw std::invalid_argument("chan_pdf_unresolved: need L >= 1, sigma > 0, nu >= 0");
    const double bin_var = double(L) * sigma * sigma;
    const double lambda = nu * nu / bin_var;
    return scaled_ncx2_grid_pdf(2.0, lambda, normalized ? 1.0 : bin_var, spec);
}

/// Case 2: every path resolves into its own bin, powers add incoherently.
/// Z^2/sigma^2 ~ chi^2(2L, nu^2/sigma^2).
inline GridPdf chan_pdf_fully_resolved(std::size_t L, double nu, double sigma,
                                       bool normalized = false, const GridSpec& spec = {}) {
    if (L == 0 || !(sigma > 0.0) || nu < 0.0)
        throw std::invalid_argument("chan_pdf_fully_resolved: need L >= 1, sigma > 0, nu >= 0");
    const double lambda = nu * nu / (sigma * sigma);
    return scaled_ncx2_grid_pdf(2.0 * double(L), lambda, normalized ? 1.0 : sigma * sigma, spec);
}

/// Partition of the L paths into resolved delay bins. The first bin holds
/// the LoS path.
struct HybridBins {
    std::vector<std::size_t> bin_sizes;
    double nu = 0.0;
    double sigma = 1.0;

    std::size_t total_paths() const {
        std::size_t s = 0;
        for (auto b : bin_sizes)
            s += b;
        return s;
    }

    std::size_t diffuse_paths() const { return total_paths() - bin_sizes.front(); }

    void validate() const {
        if (bin_sizes.empty())
            throw std::invalid_argument("HybridBins: need at least one bin");
        for (auto b : bin_sizes)
            if (b < 1)
                throw std::invalid_argument("HybridBins: bins must hold at least one path");
        if (nu < 0.0 || !(sigma > 0.0))
            throw std::invalid_argument("HybridBins: need nu >= 0 and sigma > 0");
    }
};

/// Case 3: the LoS bin combines its paths coherently into an
/// (L_1 sigma^2)-scaled noncentral chi^2(2, nu^2/(L_1 sigma^2)); the
/// remaining diffuse path powers are exchangeable Gamma(1, 2 sigma^2)
/// summands, so their two-moment (Welch-Satterthwaite) combination is the
/// exact Gamma(sum L_i, 2 sigma^2). The two parts convolve numerically.
inline GridPdf chan_pdf_hybrid(const HybridBins& bins, const GridSpec& spec = {}) {
    bins.validate();
    const double sigma2 = bins.sigma * bins.sigma;
    const double l1 = double(bins.bin_sizes.front());
    const double lambda = bins.nu * bins.nu / (l1 * sigma2);
    GridPdf los = scaled_ncx2_grid_pdf(2.0, lambda, l1 * sigma2, spec);
    if (bins.diffuse_paths() == 0)
        return los;
    const double diffuse_shape = double(bins.diffuse_paths());
    // Tabulate the diffuse part on the LoS grid step so the convolution
    // needs no resampling.
    const double mean = diffuse_shape * 2.0 * sigma2;
    const double stddev = std::sqrt(diffuse_shape) * 2.0 * sigma2;
    const double xmax = mean + spec.span_stddevs * stddev;
    const std::size_t n =
        std::max<std::size_t>(2, std::size_t(xmax / los.dx) + 2);
    GridPdf diffuse = make_grid_pdf(
        [&](double x) { return gamma_pdf(x, diffuse_shape, 2.0 * sigma2); }, 0.0, los.dx, n);
    return convolve_pdfs(los, diffuse);
}

/// Number of resolvable delay bins for delay spread T_m and signal period T.
inline std::size_t resolvable_bins(double t_m_s, double t_s) {
    if (!(t_s > 0.0))
        throw std::invalid_argument("resolvable_bins: signal period must be positive");
    if (t_m_s < 0.0)
        throw std::invalid_argument("resolvable_bins: delay spread must be >= 0");
    const double m = std::ceil(t_m_s / t_s);
    return std::max<std::size_t>(1, std::size_t(m));
}

/// Frame of C samples with per-component noise deviation sigma_w.
struct NoiseFrameSpec {
    std::size_t samples_per_frame = 10000; // C
    double sigma_w = 1.0;

    void validate() const {
        if (samples_per_frame < 2)
            throw std::invalid_argument("NoiseFrameSpec: need at least 2 samples per frame");
        if (!(sigma_w > 0.0))
            throw std::invalid_argument("NoiseFrameSpec: sigma_w must be positive");
    }
};

/// Frame-averaged noise power: Gamma((C-1)/2, 4 sigma_w^2 / (C-1)),
/// mean 2 sigma_w^2 for any frame length.
inline GridPdf noise_power_pdf(const NoiseFrameSpec& spec, const GridSpec& grid = {}) {
    spec.validate();
    const double c = double(spec.samples_per_frame);
    const double shape = (c - 1.0) / 2.0;
    const double scale = 4.0 * spec.sigma_w * spec.sigma_w / (c - 1.0);
    return gamma_grid_pdf(shape, scale, grid);
}

/// Total received power: channel power plus frame noise power, convolved.
inline GridPdf total_power_pdf(const GridPdf& chan, const GridPdf& noise) {
    return convolve_pdfs(chan, noise);
}

} // namespace rsskey
