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
#include <limits>
#include <stdexcept>

namespace rsskey {

/// Digamma via upward recurrence into the asymptotic series.
inline double digamma(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::invalid_argument("digamma: non-positive integer argument");
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

/// log of the Gamma(shape, scale) density. Log space keeps shapes of a few
/// thousand (frame-size noise shapes) well inside double range.
inline double log_gamma_pdf(double x, double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0)
        throw std::invalid_argument("gamma_pdf: shape and scale must be positive");
    if (x < 0.0)
        return -std::numeric_limits<double>::infinity();
    if (x == 0.0) {
        if (shape < 1.0)
            return std::numeric_limits<double>::infinity(); // singular endpoint
        if (shape == 1.0)
            return -std::log(scale);
        return -std::numeric_limits<double>::infinity();
    }
    return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) -
           shape * std::log(scale);
}

inline double gamma_pdf(double x, double shape, double scale) {
    return std::exp(log_gamma_pdf(x, shape, scale));
}

inline double chi2_pdf(double x, double dof) { return gamma_pdf(x, dof / 2.0, 2.0); }

/// Noncentral chi-square density, evaluated as the Poisson mixture of central
/// chi-square terms. The sum runs outward from the dominant term in log space,
/// which stays finite for the large noncentralities (nu^2/sigma^2 of a few
/// hundred) produced by the LoS power levels used here.
inline double ncx2_pdf(double x, double dof, double lambda) {
    if (dof < 1.0)
        throw std::invalid_argument("ncx2_pdf: dof must be >= 1");
    if (lambda < 0.0)
        throw std::invalid_argument("ncx2_pdf: noncentrality must be >= 0");
    if (x < 0.0)
        throw std::invalid_argument("ncx2_pdf: x must be >= 0");
    if (lambda == 0.0)
        return chi2_pdf(x, dof);
    if (x == 0.0) {
        if (dof == 2.0)
            return 0.5 * std::exp(-lambda / 2.0);
        if (dof < 2.0)
            return std::numeric_limits<double>::infinity();
        return 0.0;
    }

    const double h = dof / 2.0;
    // Term ratio t_{j+1}/t_j = (lambda*x/4) / ((j+1)(h+j)); the dominant index
    // solves (j+1)(h+j) = lambda*x/4.
    const double lx4 = lambda * x / 4.0;
    const double b = h + 1.0;
    double jpeak = (-b + std::sqrt((h - 1.0) * (h - 1.0) + lambda * x)) / 2.0;
    long j0 = jpeak > 0.0 ? long(jpeak) : 0;

    const double log_t0 = -(lambda + x) / 2.0 - std::log(2.0) +
                          double(j0) * std::log(lx4) - std::lgamma(double(j0) + 1.0) -
                          std::lgamma(h + double(j0)) + (h - 1.0) * std::log(x / 2.0);

    constexpr double kTiny = 1e-18;
    double sum = 1.0; // relative to the j0 term
    // upward
    double rel = 1.0;
    for (long j = j0;; ++j) {
        const double r = lx4 / ((double(j) + 1.0) * (h + double(j)));
        rel *= r;
        if (!(rel > kTiny))
            break;
        sum += rel;
    }
    // downward
    rel = 1.0;
    for (long j = j0; j > 0; --j) {
        const double r = (double(j) * (h + double(j) - 1.0)) / lx4;
        rel *= r;
        if (!(rel > kTiny))
            break;
        sum += rel;
    }
    return std::exp(log_t0 + std::log(sum));
}

} // namespace rsskey
