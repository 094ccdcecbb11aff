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
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rsskey/chanmodel.hpp"
#include "rsskey/fft.hpp"
#include "rsskey/rng.hpp"

namespace rsskey {

/// Complex baseband signal at a fixed sample rate.
struct Waveform {
    std::vector<std::complex<double>> samples;
    double sample_rate_hz = 0.0;
    double duration_s = 0.0;

    std::size_t size() const { return samples.size(); }
};

/// Linear FM chirp sweeping [-bandwidth/2, +bandwidth/2] over the frame.
/// Constant modulus by construction.
inline Waveform gen_chirp(double bandwidth_hz, double duration_s, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0))
        throw std::invalid_argument("gen_chirp: duration and sample rate must be positive");
    if (bandwidth_hz < 0.0)
        throw std::invalid_argument("gen_chirp: bandwidth must be >= 0");
    if (sample_rate_hz < 2.0 * bandwidth_hz)
        throw std::invalid_argument("gen_chirp: sample rate below Nyquist for requested bandwidth");
    Waveform w;
    w.sample_rate_hz = sample_rate_hz;
    w.duration_s = duration_s;
    const std::size_t n = std::size_t(std::llround(duration_s * sample_rate_hz));
    if (n == 0)
        throw std::invalid_argument("gen_chirp: frame shorter than one sample");
    w.samples.resize(n);
    const double rate = bandwidth_hz / duration_s; // sweep rate in Hz/s
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / sample_rate_hz;
        const double phase =
            2.0 * std::numbers::pi * (-0.5 * bandwidth_hz * t + 0.5 * rate * t * t);
        w.samples[i] = std::polar(1.0, phase);
    }
    return w;
}

/// Tap delays quantized to the nearest sample.
inline std::size_t delay_in_samples(double delay_s, double sample_rate_hz) {
    return std::size_t(std::llround(delay_s * sample_rate_hz));
}

/// y[m] = sum_n gain_n * x[m - d_n], same length and rate as the input.
inline Waveform apply_channel(const Waveform& x, const CirRealization& h) {
    h.validate();
    const std::size_t n = x.size();
    Waveform y;
    y.sample_rate_hz = x.sample_rate_hz;
    y.duration_s = x.duration_s;
    y.samples.assign(n, {});
    for (std::size_t tap = 0; tap < h.size(); ++tap) {
        const std::size_t d = delay_in_samples(h.delays_s[tap], x.sample_rate_hz);
        if (d >= n)
            throw std::invalid_argument("apply_channel: tap delay exceeds the frame");
        const std::complex<double> g = h.gains[tap];
        const double gr = g.real(), gi = g.imag();
        for (std::size_t m = d; m < n; ++m) {
            const std::complex<double> v = x.samples[m - d];
            y.samples[m] += std::complex<double>(gr * v.real() - gi * v.imag(),
                                                 gr * v.imag() + gi * v.real());
        }
    }
    return y;
}

inline double mean_power(const std::vector<std::complex<double>>& s) {
    double p = 0.0;
    for (const auto& z : s)
        p += z.real() * z.real() + z.imag() * z.imag();
    return s.empty() ? 0.0 : p / double(s.size());
}

/// Add complex white Gaussian noise at the requested SNR. The per-sample
/// noise variance is mean|y|^2 / 10^(snr/10); +inf SNR passes the signal
/// through untouched.
inline Waveform add_awgn(const Waveform& y, double snr_db, Xoshiro256pp& rng) {
    if (y.size() == 0)
        throw std::invalid_argument("add_awgn: empty signal");
    Waveform out = y;
    if (std::isinf(snr_db) && snr_db > 0.0)
        return out;
    const double noise_var = mean_power(y.samples) / db_to_linear(snr_db);
    const double sigma = std::sqrt(noise_var / 2.0);
    for (auto& z : out.samples)
        z += rng.cnormal(sigma);
    return out;
}

/// Unit-DC-gain linear-phase FIR low-pass (Hamming-windowed sinc).
struct FilterSpec {
    double cutoff_hz = 0.0;
    double bandwidth_hz = 0.0;
    std::size_t num_taps = 0;
    std::vector<double> impulse_response;

    void validate() const {
        if (num_taps == 0 || num_taps % 2 == 0)
            throw std::invalid_argument("FilterSpec: tap count must be odd");
        if (impulse_response.size() != num_taps)
            throw std::invalid_argument("FilterSpec: impulse response length mismatch");
        double s = 0.0;
        for (double h : impulse_response)
            s += h;
        if (std::abs(s - 1.0) > 1e-9)
            throw std::invalid_argument("FilterSpec: DC gain must be 1");
    }
};

inline FilterSpec design_lowpass(double bandwidth_hz, double sample_rate_hz,
                                 std::size_t num_taps) {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("design_lowpass: bandwidth must be positive");
    if (bandwidth_hz / 2.0 >= sample_rate_hz / 2.0)
        throw std::invalid_argument("design_lowpass: cutoff at or above Nyquist");
    if (num_taps == 0 || num_taps % 2 == 0)
        throw std::invalid_argument("design_lowpass: tap count must be odd");

    FilterSpec f;
    f.cutoff_hz = bandwidth_hz / 2.0;
    f.bandwidth_hz = bandwidth_hz;
    f.num_taps = num_taps;
    f.impulse_response.resize(num_taps);
    const double fc = f.cutoff_hz / sample_rate_hz; // cycles per sample
    const std::ptrdiff_t mid = std::ptrdiff_t(num_taps / 2);
    double sum = 0.0;
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(num_taps); ++i) {
        const double m = double(i - mid);
        const double arg = 2.0 * std::numbers::pi * fc * m;
        double sinc = m == 0.0 ? 2.0 * fc : std::sin(arg) / (std::numbers::pi * m);
        double window = 1.0;
        if (num_taps > 1)
            window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * double(i) /
                                            double(num_taps - 1));
        f.impulse_response[i] = sinc * window;
        sum += f.impulse_response[i];
    }
    for (double& h : f.impulse_response)
        h /= sum;
    return f;
}

namespace detail {

/// Frequency response of the zero-padded filter, cached per (filter, size).
inline std::vector<std::complex<double>> filter_spectrum(const FilterSpec& f,
                                                         std::size_t n_fft) {
    std::vector<std::complex<double>> g(n_fft, {});
    for (std::size_t i = 0; i < f.num_taps; ++i)
        g[i] = f.impulse_response[i];
    fft(g);
    return g;
}

/// Mean squared magnitude over the post-transient region [num_taps-1, n) of
/// the linear convolution, computed off an n_fft-sized spectrum product.
inline double rss_from_spectrum(std::vector<std::complex<double>>& z, std::size_t n,
                                std::size_t num_taps) {
    fft(z, true);
    double acc = 0.0;
    for (std::size_t m = num_taps - 1; m < n; ++m)
        acc += z[m].real() * z[m].real() + z[m].imag() * z[m].imag();
    return acc / double(n - num_taps + 1);
}

} // namespace detail

/// Time-averaged squared magnitude of the filtered frame (the RSS). The
/// first num_taps-1 filtered samples carry the edge transient and are
/// excluded from the average.
inline double measure_rss(const Waveform& y, const FilterSpec& f) {
    f.validate();
    const std::size_t n = y.size();
    if (n < f.num_taps)
        throw std::invalid_argument("measure_rss: frame shorter than the filter");
    const std::size_t n_fft = next_pow2(n + f.num_taps - 1);
    std::vector<std::complex<double>> z(n_fft, {});
    for (std::size_t i = 0; i < n; ++i)
        z[i] = y.samples[i];
    fft(z);
    const auto g = detail::filter_spectrum(f, n_fft);
    for (std::size_t i = 0; i < n_fft; ++i)
        z[i] *= g[i];
    return detail::rss_from_spectrum(z, n, f.num_taps);
}

/// One grid point of the experiment sweeps: filter bandwidth, delay spread,
/// K-factor and SNR.
struct SweepPoint {
    double bw_hz = 200e6;
    double ds_s = 50e-9;
    double k_db = 30.0;
    double snr_db = 33.0;
};

/// Fixed simulation knobs shared by all grid points.
struct SimConfig {
    TapProfile profile;
    double sample_rate_hz = 1e9;
    double frame_duration_s = 10e-6;
    double chirp_bw_hz = 250e6;
    std::size_t filter_taps = 129;
    double rho_eve = 0.0;
    int jobs = 1;
};

/// Aligned RSS observations for Alice, Bob and Eve across N frames.
struct RssDataset {
    std::vector<double> p_a, p_b, p_e;
    SweepPoint point;
    std::uint64_t seed = 0;

    std::size_t size() const { return p_a.size(); }

    void validate() const {
        if (p_a.size() != p_b.size() || p_a.size() != p_e.size())
            throw std::invalid_argument("RssDataset: vector length mismatch");
        for (std::size_t i = 0; i < p_a.size(); ++i)
            if (!(p_a[i] > 0.0) || !(p_b[i] > 0.0) || !(p_e[i] > 0.0))
                throw std::invalid_argument("RssDataset: RSS entries must be positive");
    }
};

namespace detail {

inline void parallel_frames(std::size_t n_frames, int jobs,
                            const std::function<void(std::size_t, std::size_t)>& run_range) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = jobs > 0 ? std::size_t(jobs) : std::size_t(hw);
    workers = std::min<std::size_t>(workers, n_frames);
    if (workers <= 1) {
        run_range(0, n_frames);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n_frames + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n_frames, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool)
        t.join();
}

// Sub-stream purposes within one frame. Keyed by (stream seed, frame,
// purpose) only, so a given seed reproduces the same channel and noise
// realizations at every grid point: cross-point comparisons are paired.
enum FrameStream : std::uint64_t {
    kChannelAliceBob = 1,
    kChannelEve = 2,
    kNoiseAlice = 3,
    kNoiseBob = 4,
    kNoiseEve = 5,
};

} // namespace detail

/// Frame-by-frame Monte Carlo of the full measurement chain: reciprocal
/// Alice/Bob channel plus an independent (optionally correlated) Eve draw,
/// chirp excitation, per-receiver AWGN at the requested SNR, low-pass
/// filtering and RSS extraction. Frames are independent coherence
/// intervals. Results are byte-identical for a given (seed, N, params)
/// regardless of the worker count.
inline RssDataset simulate_rss_dataset(const SweepPoint& pt, std::size_t n_frames,
                                       const SimConfig& cfg, std::uint64_t stream_seed) {
    if (n_frames == 0)
        throw std::invalid_argument("simulate_rss_dataset: need at least one frame");
    const TapProfile scaled = scale_profile(cfg.profile, pt.ds_s, pt.k_db);
    const Waveform chirp = gen_chirp(cfg.chirp_bw_hz, cfg.frame_duration_s, cfg.sample_rate_hz);
    const FilterSpec filter = design_lowpass(pt.bw_hz, cfg.sample_rate_hz, cfg.filter_taps);
    const std::size_t n = chirp.size();
    if (n < cfg.filter_taps)
        throw std::invalid_argument("simulate_rss_dataset: frame shorter than the filter");
    for (const auto& tap : scaled.taps)
        if (delay_in_samples(tap.delay_s, cfg.sample_rate_hz) >= n)
            throw std::invalid_argument("simulate_rss_dataset: tap delay exceeds the frame");

    const std::size_t n_fft = next_pow2(n + cfg.filter_taps - 1);
    const auto g_spec = detail::filter_spectrum(filter, n_fft);
    const double snr_lin = std::isinf(pt.snr_db) && pt.snr_db > 0.0
                               ? std::numeric_limits<double>::infinity()
                               : db_to_linear(pt.snr_db);

    RssDataset out;
    out.point = pt;
    out.seed = stream_seed;
    out.p_a.resize(n_frames);
    out.p_b.resize(n_frames);
    out.p_e.resize(n_frames);

    const GainModel model = FromProfile{};

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::complex<double>> spec_ab(n_fft), spec_e(n_fft), z(n_fft);
        for (std::size_t f = lo; f < hi; ++f) {
            auto rng_ab = derive_stream(stream_seed, {f, detail::kChannelAliceBob});
            auto rng_e = derive_stream(stream_seed, {f, detail::kChannelEve});
            const CirRealization h_ab = draw_cir(scaled, model, rng_ab);
            const CirRealization h_e =
                draw_correlated_cir(h_ab, scaled, model, cfg.rho_eve, rng_e);

            const Waveform y_ab = apply_channel(chirp, h_ab);
            const Waveform y_e = apply_channel(chirp, h_e);
            const double p_sig_ab = mean_power(y_ab.samples);
            const double p_sig_e = mean_power(y_e.samples);

            auto spectrum_of = [&](const Waveform& y, std::vector<std::complex<double>>& spec) {
                std::fill(spec.begin(), spec.end(), std::complex<double>{});
                std::copy(y.samples.begin(), y.samples.end(), spec.begin());
                fft(spec);
            };
            spectrum_of(y_ab, spec_ab);
            spectrum_of(y_e, spec_e);

            auto receiver_rss = [&](const std::vector<std::complex<double>>& sig_spec,
                                    double p_sig, std::uint64_t purpose) {
                // White noise drawn directly in the frequency domain; the
                // post-transient samples of the circular convolution only see
                // in-frame noise, so this matches adding time-domain AWGN.
                if (std::isinf(snr_lin)) {
                    for (std::size_t i = 0; i < n_fft; ++i)
                        z[i] = sig_spec[i] * g_spec[i];
                } else {
                    auto rng = derive_stream(stream_seed, {f, purpose});
                    const double sigma = std::sqrt(p_sig / snr_lin * double(n_fft) / 2.0);
                    for (std::size_t i = 0; i < n_fft; ++i)
                        z[i] = (sig_spec[i] + rng.cnormal(sigma)) * g_spec[i];
                }
                return detail::rss_from_spectrum(z, n, cfg.filter_taps);
            };

            out.p_a[f] = receiver_rss(spec_ab, p_sig_ab, detail::kNoiseAlice);
            out.p_b[f] = receiver_rss(spec_ab, p_sig_ab, detail::kNoiseBob);
            out.p_e[f] = receiver_rss(spec_e, p_sig_e, detail::kNoiseEve);
        }
    };
    detail::parallel_frames(n_frames, cfg.jobs, run_range);
    return out;
}

} // namespace rsskey
