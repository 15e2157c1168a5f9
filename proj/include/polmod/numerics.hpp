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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace polmod
{

/// Raised when a caller violates an operation's preconditions (bad length, empty input, ...).
class UsageError : public std::invalid_argument
{
public:
    explicit UsageError(const std::string &what) : std::invalid_argument(what) {}
};

/// Raised by detectors when the channel carries no energy for the hypothesis being tested.
class DegenerateChannelError : public std::domain_error
{
public:
    explicit DegenerateChannelError(const std::string &what) : std::domain_error(what) {}
};

// Dual-polarized signal space. Rows are receive polarizations, columns are
// transmit polarizations, so H.col(c) is the response h_c of polarization c.
template <typename T>
using Complex2Vector = Eigen::Matrix<std::complex<T>, 2, 1>;

template <typename T>
using Complex2x2 = Eigen::Matrix<std::complex<T>, 2, 2>;

using Vector2c = Complex2Vector<double>;
using Matrix2c = Complex2x2<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j))))
                return false;
    return true;
}

/// log(sum(exp(v))) evaluated with a max shift. Throws UsageError on an empty input.
template <typename T>
T log_sum_exp(std::span<const T> values)
{
    if (values.empty())
        throw UsageError("log_sum_exp: empty input");
    const T peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak))
        return peak;
    T acc = T(0);
    for (const T v : values)
        acc += std::exp(v - peak);
    return peak + std::log(acc);
}

template <typename T>
T log_sum_exp(std::initializer_list<T> values)
{
    return log_sum_exp(std::span<const T>(values.begin(), values.size()));
}

/// Two-term version used in the hot detector loops.
template <typename T>
T log_add_exp(T a, T b)
{
    const T peak = std::max(a, b);
    if (!std::isfinite(peak))
        return peak;
    return peak + std::log1p(std::exp(-std::abs(a - b)));
}

namespace detail
{
// Switch point between the power series and the Hankel expansion. At 8 the
// smallest asymptotic term is ~6e-9, too close to the accuracy target.
inline constexpr double kBesselAsymptoticFrom = 12.0;
} // namespace detail

/// Bessel function of the first kind, order zero. Accurate to ~1e-12 for |x| <= 50.
template <typename T>
T bessel_j0(T x)
{
    const T ax = std::abs(x);
    if (ax < T(detail::kBesselAsymptoticFrom))
    {
        // J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2
        const T q = ax * ax / T(4);
        T term = T(1);
        T sum = T(1);
        for (int k = 1; k < 200; ++k)
        {
            term *= -q / (T(k) * T(k));
            sum += term;
            if (std::abs(term) < std::numeric_limits<T>::epsilon() * T(1e-3))
                break;
        }
        return sum;
    }

    // Hankel expansion: J0(x) = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)), chi = x - pi/4.
    // Terms are summed until they stop decreasing.
    const T eight_x = T(8) * ax;
    T p = T(1), q = T(0);
    T term = T(1);
    T last = std::numeric_limits<T>::infinity();
    for (int k = 1; k < 60; ++k)
    {
        const T odd = T(2 * k - 1);
        term *= odd * odd / (T(k) * eight_x);
        if (std::abs(term) >= last)
            break;
        last = std::abs(term);
        // odd k feeds Q, even k feeds P, with alternating signs every two orders
        const int sign = (((k + 1) / 2) % 2 == 0) ? 1 : -1;
        if (k % 2 == 1)
            q += sign * term;
        else
            p += sign * term;
    }
    const T chi = ax - std::numbers::pi_v<T> / T(4);
    return std::sqrt(T(2) / (std::numbers::pi_v<T> * ax)) * (p * std::cos(chi) - q * std::sin(chi));
}

/// Seedable random stream. Identical (seed, stream_id) pairs give identical
/// sequences; streams are keyed through SplitMix64 into a xoshiro256** state.
class RngStream
{
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id)
    {
        std::uint64_t sm = seed ^ mix(stream_id + 0x632be59bd9b4e019ULL);
        for (auto &s : state_)
            s = splitmix_next(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in (0, 1].
    double uniform_open_closed() { return (double((*this)() >> 11) + 1.0) * 0x1.0p-53; }

    /// Uniform double in [0, 1).
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

    std::uint8_t bit() { return std::uint8_t((*this)() >> 63); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// SplitMix64 finalizer; also used to derive stream ids from tuples.
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix_next(std::uint64_t &s)
    {
        s += 0x9e3779b97f4a7c15ULL;
        return mix(s);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_[4];
};

/// Circularly-symmetric complex Gaussian, zero mean, unit variance (1/2 per real dimension).
template <typename T = double>
std::complex<T> standard_complex_gaussian(RngStream &stream)
{
    // Box-Muller with the 1/sqrt(2) scale folded into the radius.
    const double radius = std::sqrt(-std::log(stream.uniform_open_closed()));
    const double angle = 2.0 * std::numbers::pi * stream.uniform();
    return {T(radius * std::cos(angle)), T(radius * std::sin(angle))};
}

/// Real standard normal, drawn from the real part of a complex draw.
inline double standard_normal(RngStream &stream)
{
    return std::numbers::sqrt2 * standard_complex_gaussian<double>(stream).real();
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace polmod
