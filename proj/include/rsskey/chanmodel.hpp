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
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rsskey/rng.hpp"

namespace rsskey {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct Tap {
    double delay_s = 0.0;
    double power = 0.0; // linear mean power
    bool is_los = false;
};

/// Statistical multipath profile: per-tap delay, mean power and LoS flag,
/// plus the derived RMS delay spread and Rician K-factor. Powers are kept
/// normalized to unit total.
struct TapProfile {
    std::vector<Tap> taps;
    double rms_delay_spread_s = 0.0;
    double k_factor_db = 0.0;

    std::size_t size() const { return taps.size(); }

    std::size_t los_index() const {
        for (std::size_t i = 0; i < taps.size(); ++i)
            if (taps[i].is_los)
                return i;
        throw std::logic_error("TapProfile: no LoS tap");
    }

    double total_power() const {
        double s = 0.0;
        for (const auto& t : taps)
            s += t.power;
        return s;
    }

    double diffuse_power() const { return total_power() - taps[los_index()].power; }

    void validate() const {
        if (taps.empty())
            throw std::invalid_argument("TapProfile: empty profile");
        std::size_t n_los = 0;
        for (const auto& t : taps) {
            if (t.is_los)
                ++n_los;
            if (!(t.power > 0.0))
                throw std::invalid_argument("TapProfile: tap powers must be positive");
            if (t.delay_s < 0.0)
                throw std::invalid_argument("TapProfile: delays must be non-negative");
        }
        if (n_los != 1)
            throw std::invalid_argument("TapProfile: exactly one LoS tap required");
        if (!taps.front().is_los)
            throw std::invalid_argument("TapProfile: LoS tap must have the smallest delay");
        for (std::size_t i = 1; i < taps.size(); ++i)
            if (!(taps[i].delay_s > taps[i - 1].delay_s))
                throw std::invalid_argument("TapProfile: delays must be strictly increasing");
        if (std::abs(total_power() - 1.0) > 1e-9)
            throw std::invalid_argument("TapProfile: powers must sum to 1");
        const double ds = rms_delay_spread(taps);
        const double ref = std::max(std::abs(rms_delay_spread_s), 1e-300);
        if (std::abs(ds - rms_delay_spread_s) > 1e-6 * ref && std::abs(ds - rms_delay_spread_s) > 1e-18)
            throw std::invalid_argument("TapProfile: stored delay spread is stale");
    }

    static double rms_delay_spread(const std::vector<Tap>& taps) {
        double p = 0.0, m1 = 0.0, m2 = 0.0;
        for (const auto& t : taps) {
            p += t.power;
            m1 += t.power * t.delay_s;
            m2 += t.power * t.delay_s * t.delay_s;
        }
        m1 /= p;
        m2 /= p;
        return std::sqrt(std::max(0.0, m2 - m1 * m1));
    }

    static double k_factor_db_of(const std::vector<Tap>& taps) {
        double los = 0.0, diffuse = 0.0;
        for (const auto& t : taps)
            (t.is_los ? los : diffuse) += t.power;
        if (diffuse == 0.0)
            return std::numeric_limits<double>::infinity();
        return linear_to_db(los / diffuse);
    }

    /// Normalizes powers, sorts taps by delay and fills the derived fields.
    static TapProfile from_taps(std::vector<Tap> taps) {
        if (taps.empty())
            throw std::invalid_argument("TapProfile: empty tap list");
        std::sort(taps.begin(), taps.end(),
                  [](const Tap& a, const Tap& b) { return a.delay_s < b.delay_s; });
        double total = 0.0;
        for (const auto& t : taps) {
            if (!(t.power > 0.0))
                throw std::invalid_argument("TapProfile: tap powers must be positive");
            total += t.power;
        }
        for (auto& t : taps)
            t.power /= total;
        TapProfile p;
        p.taps = std::move(taps);
        p.rms_delay_spread_s = rms_delay_spread(p.taps);
        p.k_factor_db = k_factor_db_of(p.taps);
        p.validate();
        return p;
    }
};

/// Load a profile from config of the form
///   {"taps": [{"delay_ns": 0.0, "power_db": -0.03, "los": true}, ...]}
inline TapProfile load_tap_profile(const nlohmann::json& src) {
    if (!src.contains("taps") || !src["taps"].is_array() || src["taps"].empty())
        throw std::invalid_argument("load_tap_profile: config needs a non-empty taps array");
    std::vector<Tap> taps;
    for (const auto& jt : src["taps"]) {
        Tap t;
        t.delay_s = jt.at("delay_ns").get<double>() * 1e-9;
        t.power = db_to_linear(jt.at("power_db").get<double>());
        t.is_los = jt.value("los", false);
        taps.push_back(t);
    }
    return TapProfile::from_taps(std::move(taps));
}

inline TapProfile load_tap_profile(std::istream& in) {
    nlohmann::json j;
    in >> j;
    return load_tap_profile(j);
}

inline TapProfile load_tap_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_tap_profile: cannot open " + path);
    return load_tap_profile(in);
}

/// Rescale a profile to a target RMS delay spread and Rician K-factor.
/// Delays get one common scalar; the LoS tap power is retargeted and the
/// diffuse remainder renormalized, keeping unit total power.
inline TapProfile scale_profile(const TapProfile& p, double target_ds_s, double target_k_db) {
    p.validate();
    if (target_ds_s < 0.0)
        throw std::invalid_argument("scale_profile: target delay spread must be >= 0");

    TapProfile out = p;
    const double cur_ds = p.rms_delay_spread_s;
    if (target_ds_s > 0.0 && cur_ds == 0.0)
        throw std::invalid_argument("scale_profile: single-tap profile has no delay spread to scale");
    if (target_ds_s != cur_ds) {
        const double scale = cur_ds > 0.0 ? target_ds_s / cur_ds : 0.0;
        for (auto& t : out.taps)
            t.delay_s *= scale;
    }

    if (target_k_db != p.k_factor_db) {
        if (p.size() == 1)
            throw std::invalid_argument("scale_profile: cannot set a finite K-factor without diffuse taps");
        const double k_lin = db_to_linear(target_k_db);
        const double los_power = k_lin / (1.0 + k_lin);
        const double diffuse_power = 1.0 / (1.0 + k_lin);
        const double old_diffuse = p.diffuse_power();
        const std::size_t los = out.los_index();
        for (std::size_t i = 0; i < out.taps.size(); ++i) {
            if (i == los)
                out.taps[i].power = los_power;
            else
                out.taps[i].power = out.taps[i].power / old_diffuse * diffuse_power;
        }
    }

    out.rms_delay_spread_s = TapProfile::rms_delay_spread(out.taps);
    out.k_factor_db = TapProfile::k_factor_db_of(out.taps);
    out.validate();
    return out;
}

/// Explicit LoS complex-Gaussian parameters: mean amplitude nu at phase
/// theta, shared per-component deviation sigma for every tap. In this mode
/// the profile supplies delays only.
struct LosGainSpec {
    double nu = 0.0;
    double theta = 0.0;
    double sigma = 1.0;

    void validate() const {
        if (nu < 0.0)
            throw std::invalid_argument("LosGainSpec: nu must be >= 0");
        if (!(sigma > 0.0))
            throw std::invalid_argument("LosGainSpec: sigma must be > 0");
    }
};

/// Tap gains follow the profile's mean powers: diffuse taps are zero-mean
/// complex Gaussian with E|g|^2 = power, the LoS tap is the deterministic
/// ray sqrt(power)*e^{i theta}.
struct FromProfile {
    double theta = 0.0;
};

using GainModel = std::variant<FromProfile, LosGainSpec>;

/// One coherence-interval draw of the channel.
struct CirRealization {
    std::vector<std::complex<double>> gains;
    std::vector<double> delays_s;

    std::size_t size() const { return gains.size(); }

    bool operator==(const CirRealization&) const = default;

    void validate() const {
        if (gains.size() != delays_s.size())
            throw std::invalid_argument("CirRealization: gains/delays length mismatch");
        for (std::size_t i = 0; i < delays_s.size(); ++i) {
            if (delays_s[i] < 0.0)
                throw std::invalid_argument("CirRealization: negative delay");
            if (i > 0 && !(delays_s[i] > delays_s[i - 1]))
                throw std::invalid_argument("CirRealization: delays must be increasing");
        }
    }
};

inline CirRealization draw_cir(const TapProfile& p, const GainModel& model, Xoshiro256pp& rng) {
    p.validate();
    CirRealization h;
    h.gains.reserve(p.size());
    h.delays_s.reserve(p.size());
    if (const auto* spec = std::get_if<LosGainSpec>(&model)) {
        spec->validate();
        const std::complex<double> mean = std::polar(spec->nu, spec->theta);
        for (const auto& t : p.taps) {
            std::complex<double> g = rng.cnormal(spec->sigma);
            if (t.is_los)
                g += mean;
            h.gains.push_back(g);
            h.delays_s.push_back(t.delay_s);
        }
    } else {
        const double theta = std::get<FromProfile>(model).theta;
        for (const auto& t : p.taps) {
            std::complex<double> g;
            if (t.is_los)
                g = std::polar(std::sqrt(t.power), theta);
            else
                g = rng.cnormal(std::sqrt(t.power / 2.0));
            h.gains.push_back(g);
            h.delays_s.push_back(t.delay_s);
        }
    }
    return h;
}

/// Alice and Bob observe the same channel within a coherence interval;
/// reciprocity is modeled as exact equality, receiver noise provides all
/// of the divergence downstream.
inline std::pair<CirRealization, CirRealization>
draw_reciprocal_pair(const TapProfile& p, const GainModel& model, Xoshiro256pp& rng) {
    CirRealization h = draw_cir(p, model, rng);
    return {h, h};
}

/// Eavesdropper channel with optional gain correlation against a reference
/// realization: each tap mixes as mu + rho*(a - mu) + sqrt(1-rho^2)*(g - mu)
/// with g an independent draw of the same model. rho = 0 is a fresh draw.
inline CirRealization draw_correlated_cir(const CirRealization& ref, const TapProfile& p,
                                          const GainModel& model, double rho,
                                          Xoshiro256pp& rng) {
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("draw_correlated_cir: rho must be in [0, 1]");
    CirRealization g = draw_cir(p, model, rng);
    if (rho == 0.0)
        return g;
    if (ref.size() != g.size())
        throw std::invalid_argument("draw_correlated_cir: reference size mismatch");
    std::vector<std::complex<double>> means(p.size());
    if (const auto* spec = std::get_if<LosGainSpec>(&model)) {
        for (std::size_t i = 0; i < p.size(); ++i)
            means[i] = p.taps[i].is_los ? std::polar(spec->nu, spec->theta)
                                        : std::complex<double>{};
    } else {
        const double theta = std::get<FromProfile>(model).theta;
        for (std::size_t i = 0; i < p.size(); ++i)
            means[i] = p.taps[i].is_los ? std::polar(std::sqrt(p.taps[i].power), theta)
                                        : std::complex<double>{};
    }
    const double mix = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < g.size(); ++i)
        g.gains[i] = means[i] + rho * (ref.gains[i] - means[i]) + mix * (g.gains[i] - means[i]);
    return g;
}

} // namespace rsskey
