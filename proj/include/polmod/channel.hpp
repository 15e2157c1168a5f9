// SPDX-License-Identifier: Apache-2.0
//
// polmod - link-level simulator for polarized modulation over dual-polarized channels
// Copyright (C) 2026 The polmod authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "polmod/numerics.hpp"

#include <optional>

namespace polmod
{

enum class FadingModel
{
    rayleigh, ///< time-correlated Rayleigh entries
    none      ///< static channel: unit co-polar gain, constant cross-polar leakage
};

/*!
 * Dual-polarized flat-fading channel parameters.
 *
 * The co-polar entries of H have unit mean power; the cross-polar entries
 * have mean power 10^(-isolation_db/10). Each entry follows a first-order
 * Gauss-Markov process whose one-step correlation is J0(2 pi fd / Rs).
 * An optional log-normal slow-fading power scale is redrawn every
 * `block_len` channel uses.
 */
struct ChannelConfig
{
    double doppler_hz = 4.0;
    double symbol_rate_hz = 4000.0;
    double isolation_db = 26.215;
    int block_len = 100;
    double slow_fading_std_db = 0.0;
    FadingModel fading = FadingModel::rayleigh;

    void validate() const
    {
        if (!(doppler_hz >= 0.0) || !std::isfinite(doppler_hz))
            throw UsageError("channel: doppler_hz must be finite and >= 0");
        if (!(symbol_rate_hz > 0.0) || !std::isfinite(symbol_rate_hz))
            throw UsageError("channel: symbol_rate_hz must be finite and > 0");
        if (!(doppler_hz < symbol_rate_hz))
            throw UsageError("channel: doppler_hz must be below symbol_rate_hz");
        if (!std::isfinite(isolation_db))
            throw UsageError("channel: isolation_db must be finite");
        if (block_len <= 0)
            throw UsageError("channel: block_len must be positive");
        if (!(slow_fading_std_db >= 0.0) || !std::isfinite(slow_fading_std_db))
            throw UsageError("channel: slow_fading_std_db must be finite and >= 0");
    }

    /// Amplitude of the cross-polar entries relative to the co-polar ones.
    double cross_polar_amplitude() const { return std::pow(10.0, -isolation_db / 20.0); }

    /// One-step correlation of the fast-fading process.
    double one_step_correlation() const
    {
        return bessel_j0(2.0 * std::numbers::pi * doppler_hz / symbol_rate_hz);
    }
};

template <typename T>
struct ChannelState
{
    Complex2x2<T> H;         ///< effective channel, slow_amplitude * fast
    Complex2x2<T> fast;      ///< Gauss-Markov component
    T slow_amplitude = T(1); ///< sqrt of the per-block log-normal power scale
    long long time_index = 0;
};

/// Per-branch noise level for a target Eb/N0 at unit symbol energy.
struct NoiseConfig
{
    double ebn0_db = 10.0;
    int bits_per_channel_use = 1;

    double sigma2() const
    {
        if (bits_per_channel_use <= 0)
            throw UsageError("noise: bits_per_channel_use must be positive");
        return 1.0 / (db_to_linear(ebn0_db) * double(bits_per_channel_use));
    }
};

namespace detail
{
template <typename T>
Complex2x2<T> draw_scaled_gaussian(double cross_amplitude, RngStream &stream)
{
    Complex2x2<T> g;
    g(0, 0) = standard_complex_gaussian<T>(stream);
    g(1, 0) = standard_complex_gaussian<T>(stream) * T(cross_amplitude);
    g(0, 1) = standard_complex_gaussian<T>(stream) * T(cross_amplitude);
    g(1, 1) = standard_complex_gaussian<T>(stream);
    return g;
}
} // namespace detail

/// Advances the channel by one symbol period, or draws a fresh stationary
/// realization when `previous` is empty.
template <typename T = double>
ChannelState<T> next_channel(const ChannelConfig &cfg, const std::optional<ChannelState<T>> &previous,
                             RngStream &stream)
{
    cfg.validate();
    const double cross = cfg.cross_polar_amplitude();

    ChannelState<T> state;
    if (cfg.fading == FadingModel::none)
    {
        state.fast << std::complex<T>(1), std::complex<T>(T(cross)), std::complex<T>(T(cross)), std::complex<T>(1);
        state.slow_amplitude = T(1);
        state.time_index = previous ? previous->time_index + 1 : 0;
        state.H = state.fast;
        return state;
    }

    if (!previous)
    {
        state.fast = detail::draw_scaled_gaussian<T>(cross, stream);
        state.time_index = 0;
    }
    else
    {
        const double rho = cfg.one_step_correlation();
        state.time_index = previous->time_index + 1;
        if (rho >= 1.0)
            state.fast = previous->fast;
        else
            state.fast = T(rho) * previous->fast +
                         T(std::sqrt(1.0 - rho * rho)) * detail::draw_scaled_gaussian<T>(cross, stream);
    }

    const bool new_block = !previous || state.time_index % cfg.block_len == 0;
    if (!new_block)
        state.slow_amplitude = previous->slow_amplitude;
    else if (cfg.slow_fading_std_db > 0.0)
        state.slow_amplitude = T(std::pow(10.0, cfg.slow_fading_std_db * standard_normal(stream) / 20.0));
    else
        state.slow_amplitude = T(1);

    state.H = state.slow_amplitude * state.fast;
    return state;
}

/// y = H x + w, with w ~ CN(0, sigma2 I).
template <typename T>
Complex2Vector<T> apply_channel(const ChannelState<T> &state, const Complex2Vector<T> &x, double sigma2,
                                RngStream &stream)
{
    const T sigma = T(std::sqrt(sigma2));
    Complex2Vector<T> noise(standard_complex_gaussian<T>(stream), standard_complex_gaussian<T>(stream));
    return state.H * x + sigma * noise;
}

template <typename T>
Complex2Vector<T> apply_channel(const ChannelState<T> &state, const Complex2Vector<T> &x, const NoiseConfig &noise,
                                RngStream &stream)
{
    return apply_channel(state, x, noise.sigma2(), stream);
}

} // namespace polmod
