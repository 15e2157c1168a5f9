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

#include "polmod/constellation.hpp"

#include <array>

namespace polmod
{

enum class SchemeKind
{
    pmod,   ///< symbol on one polarization, polarization index carries an extra bit
    single, ///< symbol always on polarization 0
    ostbc,  ///< Alamouti code over polarization and time
    vblast  ///< two independent streams, one per polarization
};

inline std::string_view to_string(SchemeKind kind)
{
    switch (kind)
    {
    case SchemeKind::pmod:
        return "pmod";
    case SchemeKind::single:
        return "single";
    case SchemeKind::ostbc:
        return "ostbc";
    case SchemeKind::vblast:
        return "vblast";
    }
    throw UsageError("unsupported scheme");
}

/// Information bits per channel use for a constellation of b bits per symbol.
inline int bits_per_channel_use(SchemeKind kind, int bits_per_symbol)
{
    switch (kind)
    {
    case SchemeKind::pmod:
        return bits_per_symbol + 1;
    case SchemeKind::single:
    case SchemeKind::ostbc:
        return bits_per_symbol;
    case SchemeKind::vblast:
        return 2 * bits_per_symbol;
    }
    throw UsageError("unsupported scheme");
}

/// Relative spectral-efficiency gain of adding the polarization bit, 1 + 1/se.
inline double se_gain(double spectral_efficiency)
{
    if (!(spectral_efficiency > 0.0))
        throw UsageError("se_gain: spectral efficiency must be positive");
    return 1.0 + 1.0 / spectral_efficiency;
}

template <typename T>
struct TxWord
{
    int c = 0; ///< active transmit polarization
    std::size_t symbol_index = 0;
    Complex2Vector<T> x = Complex2Vector<T>::Zero();
};

/// Hierarchical view of a run of PMod words: the polarization bits form the
/// high-priority queue, the symbol bits the low-priority queue.
struct QueueSplit
{
    std::vector<std::uint8_t> hpq_bits;
    std::vector<std::uint8_t> lpq_bits;
};

inline QueueSplit split_queues(std::span<const std::uint8_t> pmod_bits, int bits_per_symbol)
{
    const std::size_t word = std::size_t(bits_per_symbol) + 1;
    if (bits_per_symbol <= 0 || pmod_bits.size() % word != 0)
        throw UsageError("split_queues: bit count is not a whole number of PMod words");
    QueueSplit split;
    split.hpq_bits.reserve(pmod_bits.size() / word);
    split.lpq_bits.reserve(pmod_bits.size() / word * std::size_t(bits_per_symbol));
    for (std::size_t i = 0; i < pmod_bits.size(); ++i)
        (i % word == 0 ? split.hpq_bits : split.lpq_bits).push_back(pmod_bits[i]);
    return split;
}

namespace detail
{
inline void expect_length(std::span<const std::uint8_t> bits, std::size_t expected, const char *what)
{
    if (bits.size() != expected)
        throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " bits, got " +
                         std::to_string(bits.size()));
}
} // namespace detail

/// First bit selects the polarization, the remaining b bits pick the symbol.
template <typename T>
TxWord<T> encode_pmod(std::span<const std::uint8_t> bits, const Constellation<T> &cst)
{
    detail::expect_length(bits, std::size_t(cst.bits_per_symbol()) + 1, "encode_pmod");
    if (bits[0] > 1)
        throw UsageError("encode_pmod: bit entries must be 0 or 1");
    TxWord<T> word;
    word.c = bits[0];
    word.symbol_index = cst.index_of(bits.subspan(1));
    word.x(word.c) = cst[word.symbol_index];
    return word;
}

template <typename T>
TxWord<T> encode_single(std::span<const std::uint8_t> bits, const Constellation<T> &cst)
{
    detail::expect_length(bits, std::size_t(cst.bits_per_symbol()), "encode_single");
    TxWord<T> word;
    word.symbol_index = cst.index_of(bits);
    word.x(0) = cst[word.symbol_index];
    return word;
}

/// Two symbols over two channel uses.
template <typename T>
struct OstbcWord
{
    std::array<std::size_t, 2> symbol_index{};
    std::array<Complex2Vector<T>, 2> x; ///< transmit vectors at the first and second use
};

/*!
 * Alamouti code across polarizations and time:
 *
 *     use 1: ( s1, s2)^T / sqrt(2)
 *     use 2: (-s2*, s1*)^T / sqrt(2)
 *
 * so each use radiates unit total energy for unit-energy symbols.
 */
template <typename T>
OstbcWord<T> encode_ostbc(std::span<const std::uint8_t> bits, const Constellation<T> &cst)
{
    const std::size_t b = std::size_t(cst.bits_per_symbol());
    detail::expect_length(bits, 2 * b, "encode_ostbc");
    OstbcWord<T> word;
    word.symbol_index = {cst.index_of(bits.first(b)), cst.index_of(bits.subspan(b))};
    const T scale = T(1) / std::sqrt(T(2));
    const auto s1 = cst[word.symbol_index[0]] * scale;
    const auto s2 = cst[word.symbol_index[1]] * scale;
    word.x[0] << s1, s2;
    word.x[1] << -std::conj(s2), std::conj(s1);
    return word;
}

template <typename T>
struct VblastWord
{
    std::array<std::size_t, 2> symbol_index{};
    Complex2Vector<T> x;
};

/// First b bits go to polarization 0, the last b to polarization 1, each at half power.
template <typename T>
VblastWord<T> encode_vblast(std::span<const std::uint8_t> bits, const Constellation<T> &cst)
{
    const std::size_t b = std::size_t(cst.bits_per_symbol());
    detail::expect_length(bits, 2 * b, "encode_vblast");
    VblastWord<T> word;
    word.symbol_index = {cst.index_of(bits.first(b)), cst.index_of(bits.subspan(b))};
    const T scale = T(1) / std::sqrt(T(2));
    word.x << cst[word.symbol_index[0]] * scale, cst[word.symbol_index[1]] * scale;
    return word;
}

} // namespace polmod
