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
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsskey/fft.hpp"

namespace rsskey {

/// Probability density sampled at the nodes x0 + i*dx. Integrals and moments
/// use the trapezoidal rule. This is the common currency of the analytic
/// distributions: everything that needs a convolution goes through here.
struct GridPdf {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> density;

    std::size_t size() const { return density.size(); }
    double x_at(std::size_t i) const { return x0 + double(i) * dx; }
    double x_max() const { return density.empty() ? x0 : x_at(density.size() - 1); }

    double integral() const {
        if (density.size() < 2)
            return 0.0;
        double s = 0.0;
        for (double d : density)
            s += d;
        s -= 0.5 * (density.front() + density.back());
        return s * dx;
    }

    void normalize() {
        const double s = integral();
        if (!(s > 0.0))
            throw std::runtime_error("GridPdf::normalize: non-positive total mass");
        const double inv = 1.0 / s;
        for (double& d : density)
            d *= inv;
    }

    double mean() const {
        double s = 0.0;
        for (std::size_t i = 0; i < density.size(); ++i)
            s += x_at(i) * density[i];
        s -= 0.5 * (x_at(0) * density.front() + x_max() * density.back());
        return s * dx;
    }

    double variance() const {
        const double mu = mean();
        double s = 0.0;
        for (std::size_t i = 0; i < density.size(); ++i) {
            const double c = x_at(i) - mu;
            s += c * c * density[i];
        }
        const double c0 = x_at(0) - mu;
        const double c1 = x_max() - mu;
        s -= 0.5 * (c0 * c0 * density.front() + c1 * c1 * density.back());
        return s * dx;
    }

    /// Cumulative trapezoidal integral at every node; cdf()[0] == 0.
    std::vector<double> cdf() const {
        std::vector<double> c(density.size(), 0.0);
        for (std::size_t i = 1; i < density.size(); ++i)
            c[i] = c[i - 1] + 0.5 * dx * (density[i - 1] + density[i]);
        return c;
    }

    void validate() const {
        if (!(dx > 0.0))
            throw std::invalid_argument("GridPdf: dx must be positive");
        for (double d : density)
            if (!(d >= 0.0))
                throw std::invalid_argument("GridPdf: density must be non-negative");
        if (std::abs(integral() - 1.0) > 1e-6)
            throw std::invalid_argument("GridPdf: density must integrate to 1");
    }
};

/// Tabulate a scalar density on [x0, x0 + (n-1)*dx]. If the density is
/// singular at the left endpoint (gamma shapes below 1 return +inf there),
/// the first node is evaluated half a cell in.
inline GridPdf make_grid_pdf(const std::function<double(double)>& pdf, double x0, double dx,
                             std::size_t n, bool renormalize = true) {
    if (!(dx > 0.0) || n < 2)
        throw std::invalid_argument("make_grid_pdf: need dx > 0 and n >= 2");
    GridPdf g;
    g.x0 = x0;
    g.dx = dx;
    g.density.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        g.density[i] = pdf(x0 + double(i) * dx);
    if (std::isinf(g.density[0]))
        g.density[0] = pdf(x0 + 0.5 * dx);
    if (renormalize)
        g.normalize();
    return g;
}

namespace detail {

/// Linear interpolation of a node-sampled CDF.
class CdfInterp {
public:
    CdfInterp(const GridPdf& g) : x0_(g.x0), dx_(g.dx), c_(g.cdf()) {
        total_ = c_.empty() ? 0.0 : c_.back();
    }

    double total() const { return total_; }

    double operator()(double x) const {
        if (c_.empty())
            return 0.0;
        const double t = (x - x0_) / dx_;
        if (t <= 0.0)
            return 0.0;
        if (t >= double(c_.size() - 1))
            return total_;
        const std::size_t i = std::size_t(t);
        const double f = t - double(i);
        return c_[i] + f * (c_[i + 1] - c_[i]);
    }

private:
    double x0_, dx_;
    std::vector<double> c_;
    double total_ = 0.0;
};

} // namespace detail

/// Resample onto a new grid by differencing the interpolated CDF; mass in
/// cells narrower than the target step lands in the covering bin instead of
/// being lost, so near-degenerate densities survive the transfer.
inline GridPdf resample(const GridPdf& p, double new_x0, double new_dx, std::size_t n) {
    if (!(new_dx > 0.0) || n < 2)
        throw std::invalid_argument("resample: need dx > 0 and n >= 2");
    const detail::CdfInterp F(p);
    GridPdf out;
    out.x0 = new_x0;
    out.dx = new_dx;
    out.density.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xc = new_x0 + double(i) * new_dx;
        const double lo = F(xc - 0.5 * new_dx);
        const double hi = F(xc + 0.5 * new_dx);
        out.density[i] = std::max(0.0, (hi - lo) / new_dx);
    }
    if (!(out.integral() > 0.0))
        throw std::runtime_error("resample: target grid does not cover the source support");
    out.normalize();
    return out;
}

/// Discrete linear convolution of two densities, scaled by dx and
/// renormalized. The support start adds. Step mismatches are resolved by
/// resampling the second operand onto the first grid's step.
inline GridPdf convolve_pdfs(const GridPdf& p, const GridPdf& q) {
    if (p.density.size() < 2 || q.density.size() < 2)
        throw std::invalid_argument("convolve_pdfs: operands must have at least 2 nodes");
    const GridPdf* qq = &q;
    GridPdf q_res;
    if (std::abs(p.dx - q.dx) > 1e-12 * std::max(p.dx, q.dx)) {
        const std::size_t n = std::max<std::size_t>(2, std::size_t((q.x_max() - q.x0) / p.dx) + 2);
        q_res = resample(q, q.x0, p.dx, n);
        qq = &q_res;
    }

    const std::size_t n_out = p.size() + qq->size() - 1;
    const std::size_t n_fft = next_pow2(n_out);
    std::vector<std::complex<double>> fa(n_fft), fb(n_fft);
    for (std::size_t i = 0; i < p.size(); ++i)
        fa[i] = p.density[i];
    for (std::size_t i = 0; i < qq->size(); ++i)
        fb[i] = qq->density[i];
    fft(fa);
    fft(fb);
    for (std::size_t i = 0; i < n_fft; ++i)
        fa[i] *= fb[i];
    fft(fa, true);

    GridPdf out;
    out.x0 = p.x0 + qq->x0;
    out.dx = p.dx;
    out.density.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i)
        out.density[i] = std::max(0.0, fa[i].real() * p.dx);
    out.normalize();
    return out;
}

/// Kolmogorov-Smirnov distance between the grid CDF and the empirical CDF of
/// a sample. The sample is sorted in place.
inline double ks_distance(const GridPdf& p, std::vector<double>& samples) {
    if (samples.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const detail::CdfInterp F(p);
    const double total = F.total();
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = F(samples[i]) / total;
        d = std::max(d, std::abs(f - double(i) / n));
        d = std::max(d, std::abs(f - double(i + 1) / n));
    }
    return d;
}

/// KS distance between two grid densities (used for case-equivalence checks).
inline double ks_distance(const GridPdf& p, const GridPdf& q) {
    const detail::CdfInterp Fp(p), Fq(q);
    const double lo = std::min(p.x0, q.x0);
    const double hi = std::max(p.x_max(), q.x_max());
    const std::size_t n = 4096;
    double d = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(n);
        d = std::max(d, std::abs(Fp(x) / Fp.total() - Fq(x) / Fq.total()));
    }
    return d;
}

} // namespace rsskey
