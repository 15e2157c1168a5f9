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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace polmod
{

enum class ModulationKind
{
    bpsk,
    qpsk,
    qam16
};

inline std::string_view to_string(ModulationKind kind)
{
    switch (kind)
    {
    case ModulationKind::bpsk:
        return "bpsk";
    case ModulationKind::qpsk:
        return "qpsk";
    case ModulationKind::qam16:
        return "qam16";
    }
    throw UsageError("unsupported modulation kind");
}

inline ModulationKind parse_modulation(std::string_view name)
{
    if (name == "bpsk")
        return ModulationKind::bpsk;
    if (name == "qpsk")
        return ModulationKind::qpsk;
    if (name == "qam16" || name == "16qam")
        return ModulationKind::qam16;
    throw UsageError("unsupported modulation '" + std::string(name) + "'");
}

/// Unit-energy, Gray-labelled symbol alphabet.
///
/// Point i carries the bit label i read most-significant bit first, so the
/// symbol index and its label are the same integer. Geometry is arranged so
/// that nearest neighbours differ in exactly one label bit.
template <typename T>
class Constellation
{
public:
    Constellation(ModulationKind kind, std::vector<std::complex<T>> points, int bits_per_symbol)
        : kind_(kind), points_(std::move(points)), bits_per_symbol_(bits_per_symbol)
    {
    }

    ModulationKind kind() const { return kind_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<std::complex<T>> &points() const { return points_; }
    const std::complex<T> &operator[](std::size_t index) const { return points_[index]; }

    /// Bit label of a symbol index, MSB first.
    std::vector<std::uint8_t> label(std::size_t index) const
    {
        std::vector<std::uint8_t> bits(bits_per_symbol_);
        for (int i = 0; i < bits_per_symbol_; ++i)
            bits[i] = std::uint8_t((index >> (bits_per_symbol_ - 1 - i)) & 1U);
        return bits;
    }

    /// Symbol index of a bit pattern, MSB first.
    std::size_t index_of(std::span<const std::uint8_t> bits) const
    {
        if (bits.size() != std::size_t(bits_per_symbol_))
            throw UsageError("bit pattern length " + std::to_string(bits.size()) + " does not match " +
                             std::to_string(bits_per_symbol_) + " bits per symbol");
        std::size_t index = 0;
        for (const auto b : bits)
        {
            if (b > 1)
                throw UsageError("bit pattern entries must be 0 or 1");
            index = (index << 1) | b;
        }
        return index;
    }

private:
    ModulationKind kind_;
    std::vector<std::complex<T>> points_;
    int bits_per_symbol_;
};

namespace detail
{
// Two Gray bits -> PAM level in {-3, -1, +1, +3}: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
inline int gray_pam4(unsigned two_bits)
{
    constexpr std::array<int, 4> levels{-3, -1, 3, 1};
    return levels[two_bits & 3U];
}
} // namespace detail

template <typename T = double>
Constellation<T> make_constellation(ModulationKind kind)
{
    using C = std::complex<T>;
    switch (kind)
    {
    case ModulationKind::bpsk:
        return Constellation<T>(kind, {C(1, 0), C(-1, 0)}, 1);
    case ModulationKind::qpsk:
    {
        // bit 0 -> in-phase sign, bit 1 -> quadrature sign
        const T a = T(1) / std::sqrt(T(2));
        std::vector<C> pts(4);
        for (unsigned i = 0; i < 4; ++i)
            pts[i] = C((i & 2U) ? -a : a, (i & 1U) ? -a : a);
        return Constellation<T>(kind, std::move(pts), 2);
    }
    case ModulationKind::qam16:
    {
        // first two bits -> in-phase level, last two -> quadrature level
        const T scale = T(1) / std::sqrt(T(10));
        std::vector<C> pts(16);
        for (unsigned i = 0; i < 16; ++i)
            pts[i] = C(T(detail::gray_pam4(i >> 2)) * scale, T(detail::gray_pam4(i)) * scale);
        return Constellation<T>(kind, std::move(pts), 4);
    }
    }
    throw UsageError("unsupported modulation kind");
}

template <typename T>
std::complex<T> map_bits(const Constellation<T> &cst, std::span<const std::uint8_t> bits)
{
    return cst[cst.index_of(bits)];
}

/// Nearest constellation point in Euclidean distance; the lowest index wins ties.
template <typename T>
std::size_t nearest_symbol(const Constellation<T> &cst, const std::complex<T> &z)
{
    std::size_t best = 0;
    T best_dist = std::numeric_limits<T>::infinity();
    for (std::size_t i = 0; i < cst.size(); ++i)
    {
        const T d = std::norm(z - cst[i]);
        if (d < best_dist)
        {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

struct HardDecision
{
    std::size_t index;
    std::vector<std::uint8_t> bits;
};

template <typename T>
HardDecision demap_hard(const Constellation<T> &cst, const std::complex<T> &z)
{
    const std::size_t index = nearest_symbol(cst, z);
    return {index, cst.label(index)};
}

} // namespace polmod
