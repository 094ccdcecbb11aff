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

#include "rsskey/mi.hpp"

namespace rsskey {

/// Secret-key-rate bounds in bits: I(A;B) - I(A;E) <= R <= I(A;B). A
/// negative lower bound is vacuous rather than a rate, so it is clamped to
/// zero and flagged.
struct RateBounds {
    double lower_bits = 0.0;
    double upper_bits = 0.0;
    double i_ab_bits = 0.0;
    double i_ae_bits = 0.0;
    bool lower_clamped = false;
    bool sample_count_mismatch = false;
};

inline RateBounds skg_bounds(const MiEstimate& i_ab, const MiEstimate& i_ae) {
    RateBounds rb;
    rb.i_ab_bits = i_ab.bits;
    rb.i_ae_bits = i_ae.bits;
    rb.upper_bits = i_ab.bits;
    const double gap = i_ab.bits - i_ae.bits;
    rb.lower_clamped = gap < 0.0;
    rb.lower_bits = std::max(0.0, gap);
    rb.sample_count_mismatch = i_ab.n_samples != i_ae.n_samples;
    return rb;
}

} // namespace rsskey
