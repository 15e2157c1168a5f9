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

#include "polmod/metrics.hpp"

#include "polmod/numerics.hpp"

#include <cmath>
#include <limits>

namespace polmod
{

namespace
{
double ratio(std::uint64_t num, std::uint64_t den)
{
    return den == 0 ? 0.0 : double(num) / double(den);
}
} // namespace

ErrorCounters &ErrorCounters::operator+=(const ErrorCounters &other)
{
    if (block_open || other.block_open)
        throw UsageError("ErrorCounters: cannot merge counters with an open block");
    bits_total += other.bits_total;
    bits_error += other.bits_error;
    hpq_total += other.hpq_total;
    hpq_error += other.hpq_error;
    lpq_total += other.lpq_total;
    lpq_error += other.lpq_error;
    blocks_total += other.blocks_total;
    blocks_error += other.blocks_error;
    return *this;
}

double ErrorCounters::ber() const { return ratio(bits_error, bits_total); }
double ErrorCounters::ber_hpq() const { return ratio(hpq_error, hpq_total); }
double ErrorCounters::ber_lpq() const { return ratio(lpq_error, lpq_total); }
double ErrorCounters::bler() const { return ratio(blocks_error, blocks_total); }

ErrorCounters accumulate(ErrorCounters counters, std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx,
                         const QueueLayout &layout, bool closes_block)
{
    if (tx.size() != rx.size())
        throw UsageError("accumulate: tx and rx bit sequences differ in length");
    if (layout.word_bits == 0 || layout.hpq_bits_per_word > layout.word_bits)
        throw UsageError("accumulate: invalid queue layout");

    for (std::size_t i = 0; i < tx.size(); ++i)
    {
        const bool err = tx[i] != rx[i];
        const bool hpq = i % layout.word_bits < layout.hpq_bits_per_word;
        ++counters.bits_total;
        counters.bits_error += err;
        if (hpq)
        {
            ++counters.hpq_total;
            counters.hpq_error += err;
        }
        else
        {
            ++counters.lpq_total;
            counters.lpq_error += err;
        }
        counters.block_has_error = counters.block_has_error || err;
    }
    counters.block_open = true;

    if (closes_block)
    {
        ++counters.blocks_total;
        counters.blocks_error += counters.block_has_error;
        counters.block_open = false;
        counters.block_has_error = false;
    }
    return counters;
}

double blsr(const ErrorCounters &counters)
{
    if (counters.blocks_total == 0)
        throw UsageError("blsr: no blocks counted");
    return 1.0 - double(counters.blocks_error) / double(counters.blocks_total);
}

double gain_degradation(double blsr_at_xpd, double blsr_reference)
{
    if (!(blsr_reference > 0.0))
        throw UsageError("gain_degradation: reference BLSR must be positive");
    return blsr_at_xpd / blsr_reference;
}

double xpd_db(const XpdSample &sample)
{
    if (sample.y_crosspolar_mag == 0.0)
        return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(sample.y_copolar_mag / sample.y_crosspolar_mag);
}

} // namespace polmod
