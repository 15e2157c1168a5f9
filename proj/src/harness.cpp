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

#include "polmod/harness.hpp"

#include "polmod/detectors.hpp"

#include <atomic>
#include <bit>
#include <cstdio>
#include <sstream>
#include <thread>

namespace polmod
{

std::string_view to_string(LinkScheme scheme)
{
    switch (scheme)
    {
    case LinkScheme::pmod_mld:
        return "pmod_mld";
    case LinkScheme::pmod_nod:
        return "pmod_nod";
    case LinkScheme::single:
        return "single";
    case LinkScheme::ostbc:
        return "ostbc";
    case LinkScheme::vblast:
        return "vblast";
    }
    throw UsageError("unsupported scheme");
}

LinkScheme parse_link_scheme(std::string_view name)
{
    for (const auto s : {LinkScheme::pmod_mld, LinkScheme::pmod_nod, LinkScheme::single, LinkScheme::ostbc,
                         LinkScheme::vblast})
        if (to_string(s) == name)
            return s;
    throw UsageError("unknown scheme '" + std::string(name) + "'");
}

SchemeKind scheme_kind(LinkScheme scheme)
{
    switch (scheme)
    {
    case LinkScheme::pmod_mld:
    case LinkScheme::pmod_nod:
        return SchemeKind::pmod;
    case LinkScheme::single:
        return SchemeKind::single;
    case LinkScheme::ostbc:
        return SchemeKind::ostbc;
    case LinkScheme::vblast:
        return SchemeKind::vblast;
    }
    throw UsageError("unsupported scheme");
}

std::uint64_t point_stream_id(std::uint64_t master_seed, LinkScheme scheme, ModulationKind modulation,
                              double ebn0_db, double xpd_db)
{
    std::uint64_t h = RngStream::mix(master_seed ^ 0x5bd1e9955bd1e995ULL);
    h = RngStream::mix(h ^ std::uint64_t(scheme));
    h = RngStream::mix(h ^ (std::uint64_t(modulation) << 8));
    h = RngStream::mix(h ^ std::bit_cast<std::uint64_t>(ebn0_db));
    h = RngStream::mix(h ^ std::bit_cast<std::uint64_t>(xpd_db));
    return h;
}

namespace
{

void draw_bits(RngStream &stream, std::span<std::uint8_t> out)
{
    for (auto &b : out)
        b = stream.bit();
}

void write_label(std::size_t index, int bits_per_symbol, std::span<std::uint8_t> out)
{
    for (int i = 0; i < bits_per_symbol; ++i)
        out[i] = std::uint8_t((index >> (bits_per_symbol - 1 - i)) & 1U);
}

} // namespace

ErrorCounters simulate_block(LinkScheme scheme, const Constellation<double> &cst, const ChannelConfig &channel,
                             double ebn0_db, RngStream &stream)
{
    const int b = cst.bits_per_symbol();
    const SchemeKind kind = scheme_kind(scheme);
    const int word_bits = bits_per_channel_use(kind, b);
    const double sigma2 = NoiseConfig{ebn0_db, word_bits}.sigma2();
    const auto uses = std::size_t(channel.block_len);

    std::vector<std::uint8_t> tx(uses * std::size_t(word_bits));
    std::vector<std::uint8_t> rx(tx.size());
    draw_bits(stream, tx);

    std::optional<ChannelState<double>> state;
    QueueLayout layout{std::size_t(word_bits), 0};

    switch (kind)
    {
    case SchemeKind::pmod:
    {
        layout = {std::size_t(b) + 1, 1};
        for (std::size_t u = 0; u < uses; ++u)
        {
            state = next_channel<double>(channel, state, stream);
            const auto bits = std::span<const std::uint8_t>(tx).subspan(u * word_bits, word_bits);
            const auto word = encode_pmod(bits, cst);
            const Vector2c y = apply_channel(*state, word.x, sigma2, stream);
            const auto det = scheme == LinkScheme::pmod_mld ? detect_pmod_mld(y, state->H, cst)
                                                            : detect_pmod_nod(y, state->H, cst, sigma2);
            auto out = std::span<std::uint8_t>(rx).subspan(u * word_bits, word_bits);
            out[0] = std::uint8_t(det.c_hat);
            write_label(det.symbol_hat, b, out.subspan(1));
        }
        break;
    }
    case SchemeKind::single:
        for (std::size_t u = 0; u < uses; ++u)
        {
            state = next_channel<double>(channel, state, stream);
            const auto bits = std::span<const std::uint8_t>(tx).subspan(u * word_bits, word_bits);
            const auto word = encode_single(bits, cst);
            const Vector2c y = apply_channel(*state, word.x, sigma2, stream);
            write_label(detect_single(y, state->H, cst), b, std::span<std::uint8_t>(rx).subspan(u * word_bits));
        }
        break;
    case SchemeKind::ostbc:
        // one fading step per codeword: the channel is held over both uses
        for (std::size_t u = 0; u < uses; u += 2)
        {
            state = next_channel<double>(channel, state, stream);
            const auto bits = std::span<const std::uint8_t>(tx).subspan(u * word_bits, 2 * word_bits);
            const auto word = encode_ostbc(bits, cst);
            const Vector2c y1 = apply_channel(*state, word.x[0], sigma2, stream);
            const Vector2c y2 = apply_channel(*state, word.x[1], sigma2, stream);
            const auto det = detect_ostbc(y1, y2, state->H, cst);
            auto out = std::span<std::uint8_t>(rx).subspan(u * word_bits, 2 * word_bits);
            write_label(det[0], b, out);
            write_label(det[1], b, out.subspan(b));
        }
        break;
    case SchemeKind::vblast:
        for (std::size_t u = 0; u < uses; ++u)
        {
            state = next_channel<double>(channel, state, stream);
            const auto bits = std::span<const std::uint8_t>(tx).subspan(u * word_bits, word_bits);
            const auto word = encode_vblast(bits, cst);
            const Vector2c y = apply_channel(*state, word.x, sigma2, stream);
            const auto det = detect_vblast_mmse(y, state->H, cst, sigma2);
            auto out = std::span<std::uint8_t>(rx).subspan(u * word_bits, word_bits);
            write_label(det[0], b, out);
            write_label(det[1], b, out.subspan(b));
        }
        break;
    }

    return accumulate(ErrorCounters{}, tx, rx, layout, true);
}

SweepRecord run_point(const SweepConfig &cfg, LinkScheme scheme, double ebn0_db, double xpd_db, int workers)
{
    cfg.validate();
    if (workers < 1)
        throw UsageError("run_point: workers must be >= 1");

    ChannelConfig channel = cfg.channel;
    channel.isolation_db = xpd_db;
    channel.block_len = cfg.block_len;
    const auto cst = make_constellation<double>(cfg.modulation);
    const std::uint64_t point_id = point_stream_id(cfg.master_seed, scheme, cfg.modulation, ebn0_db, xpd_db);

    SweepRecord record;
    record.scheme = scheme;
    record.modulation = cfg.modulation;
    record.ebn0_db = ebn0_db;
    record.xpd_db = xpd_db;
    record.seed = cfg.master_seed;

    auto run_trial = [&](std::uint64_t trial) {
        RngStream stream(point_id, trial);
        return simulate_block(scheme, cst, channel, ebn0_db, stream);
    };
    auto done = [&](const ErrorCounters &c) {
        return c.bits_error >= cfg.stop.min_errors || c.bits_total >= cfg.stop.max_bits;
    };

    const std::uint64_t batch = 64 * std::uint64_t(workers);
    std::vector<ErrorCounters> results(batch);
    std::uint64_t next_trial = 0;
    while (true)
    {
        if (workers == 1)
        {
            for (std::uint64_t i = 0; i < batch; ++i)
                results[i] = run_trial(next_trial + i);
        }
        else
        {
            std::atomic<std::uint64_t> cursor{0};
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::uint64_t i = cursor++; i < batch; i = cursor++)
                        results[i] = run_trial(next_trial + i);
                });
        }
        // merge strictly in trial order; anything past the stopping block is discarded
        for (std::uint64_t i = 0; i < batch; ++i)
        {
            record.counters += results[i];
            if (done(record.counters))
                return record;
        }
        next_trial += batch;
    }
}

std::vector<SweepRecord> run_sweep(const SweepConfig &cfg, int workers)
{
    cfg.validate();
    std::vector<SweepRecord> records;
    for (const auto scheme : cfg.schemes)
        for (const double xpd : cfg.xpd_grid_db)
            for (const double ebn0 : cfg.ebn0_grid_db)
                records.push_back(run_point(cfg, scheme, ebn0, xpd, workers));
    return records;
}

void write_csv(std::ostream &out, const std::vector<SweepRecord> &records)
{
    out << "scheme,modulation,ebn0_db,xpd_db,ber,ber_hpq,ber_lpq,bler,blsr,bits,errors,seed\n";
    char line[512];
    for (const auto &r : records)
    {
        std::snprintf(line, sizeof line, "%s,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%llu,%llu,%llu\n",
                      std::string(to_string(r.scheme)).c_str(), std::string(to_string(r.modulation)).c_str(),
                      r.ebn0_db, r.xpd_db, r.ber(), r.ber_hpq(), r.ber_lpq(), r.bler(), r.blsr(),
                      static_cast<unsigned long long>(r.counters.bits_total),
                      static_cast<unsigned long long>(r.counters.bits_error),
                      static_cast<unsigned long long>(r.seed));
        out << line;
    }
}

std::string to_csv(const std::vector<SweepRecord> &records)
{
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

std::vector<LabeledPoint> dump_hierarchical_constellation(const Matrix2c &H, const Constellation<double> &cst)
{
    if (!all_finite(H))
        throw UsageError("dump_hierarchical_constellation: channel must be finite");
    std::vector<LabeledPoint> points;
    points.reserve(2 * cst.size());
    for (int c = 0; c < 2; ++c)
    {
        const double radius = H.col(c).norm();
        for (std::size_t i = 0; i < cst.size(); ++i)
            points.push_back({c, i, radius * cst[i]});
    }
    return points;
}

} // namespace polmod
