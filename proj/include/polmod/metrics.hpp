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

#include <cstdint>
#include <span>

namespace polmod
{

/// Bit and block error tallies. Counters form a monoid under operator+=,
/// so per-worker tallies can be merged in any order.
struct ErrorCounters
{
    std::uint64_t bits_total = 0;
    std::uint64_t bits_error = 0;
    std::uint64_t hpq_total = 0;
    std::uint64_t hpq_error = 0;
    std::uint64_t lpq_total = 0;
    std::uint64_t lpq_error = 0;
    std::uint64_t blocks_total = 0;
    std::uint64_t blocks_error = 0;

    // state of a block that has received bits but not yet been closed
    bool block_open = false;
    bool block_has_error = false;

    ErrorCounters &operator+=(const ErrorCounters &other);
    friend bool operator==(const ErrorCounters &, const ErrorCounters &) = default;

    double ber() const;
    double ber_hpq() const;
    double ber_lpq() const;
    double bler() const;
};

/// Which bit positions of a repeating word belong to the high-priority queue:
/// the first `hpq_bits_per_word` bits of every `word_bits`-bit word.
struct QueueLayout
{
    std::size_t word_bits = 1;
    std::size_t hpq_bits_per_word = 0;
};

/// Adds the Hamming comparison of `tx` and `rx` to the counters. When
/// `closes_block` is set the current block is counted, errored if any of its
/// bits differed.
ErrorCounters accumulate(ErrorCounters counters, std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx,
                         const QueueLayout &layout, bool closes_block);

/// 1 - BLER. Throws UsageError when no block has been counted.
double blsr(const ErrorCounters &counters);

/// BLSR at some XPD relative to the same scheme at ideal isolation.
double gain_degradation(double blsr_at_xpd, double blsr_reference);

struct XpdSample
{
    double y_copolar_mag = 0.0;
    double y_crosspolar_mag = 0.0;
};

/// 20 log10(|y_c| / |y_(1-c)|); +infinity when the cross-polar magnitude is zero.
double xpd_db(const XpdSample &sample);

} // namespace polmod
