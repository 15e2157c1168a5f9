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

#include "polmod/channel.hpp"
#include "polmod/constellation.hpp"
#include "polmod/metrics.hpp"
#include "polmod/schemes.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace polmod
{

/// Transmit scheme paired with its receiver, as swept by the harness.
enum class LinkScheme
{
    pmod_mld,
    pmod_nod,
    single,
    ostbc,
    vblast
};

std::string_view to_string(LinkScheme scheme);
LinkScheme parse_link_scheme(std::string_view name);
SchemeKind scheme_kind(LinkScheme scheme);

/// Monte Carlo stopping rule, checked after every block.
struct StopRule
{
    std::uint64_t min_errors = 200;
    std::uint64_t max_bits = 10'000'000;
};

struct SweepConfig
{
    std::vector<LinkScheme> schemes{LinkScheme::pmod_mld, LinkScheme::pmod_nod, LinkScheme::single,
                                    LinkScheme::ostbc, LinkScheme::vblast};
    ModulationKind modulation = ModulationKind::qpsk;
    std::vector<double> ebn0_grid_db{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::vector<double> xpd_grid_db{26.215};
    ChannelConfig channel; ///< isolation_db is overridden by each xpd grid point
    int block_len = 100;
    StopRule stop;
    std::uint64_t master_seed = 1;

    std::filesystem::path output_dir = "results";
    std::string csv_name = "sweep.csv";
    bool plots = true;

    void validate() const;
};

/// Parses the line-oriented `key = value` format with [sweep], [channel],
/// [stop] and [output] sections. Unknown sections or keys are errors.
SweepConfig parse_config(std::istream &in);
SweepConfig load_config(const std::filesystem::path &path);

/// Expands "a, b, c" or "start:step:stop" (inclusive) into a grid.
std::vector<double> parse_grid(std::string_view text);

struct SweepRecord
{
    LinkScheme scheme = LinkScheme::pmod_mld;
    ModulationKind modulation = ModulationKind::qpsk;
    double ebn0_db = 0.0;
    double xpd_db = 0.0;
    ErrorCounters counters;
    std::uint64_t seed = 0;

    double ber() const { return counters.ber(); }
    double ber_hpq() const { return counters.ber_hpq(); }
    double ber_lpq() const { return counters.ber_lpq(); }
    double bler() const { return counters.bler(); }
    double blsr() const { return polmod::blsr(counters); }
};

/// Stream id of a sweep point, a hash of (seed, scheme, modulation, Eb/N0, XPD).
std::uint64_t point_stream_id(std::uint64_t master_seed, LinkScheme scheme, ModulationKind modulation,
                              double ebn0_db, double xpd_db);

/// Runs one block of `channel.block_len` channel uses from a fresh channel draw.
ErrorCounters simulate_block(LinkScheme scheme, const Constellation<double> &cst, const ChannelConfig &channel,
                             double ebn0_db, RngStream &stream);

/// Simulates blocks until the stop rule is met. Block t draws from stream
/// (point id, t), and blocks are merged in index order, so the result does
/// not depend on `workers`.
SweepRecord run_point(const SweepConfig &cfg, LinkScheme scheme, double ebn0_db, double xpd_db, int workers = 1);

/// All (scheme, xpd, Eb/N0) points, in that nesting order.
std::vector<SweepRecord> run_sweep(const SweepConfig &cfg, int workers = 1);

void write_csv(std::ostream &out, const std::vector<SweepRecord> &records);
std::string to_csv(const std::vector<SweepRecord> &records);

/// Writes the CSV and, if enabled, the figure files into cfg.output_dir.
/// Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const SweepConfig &cfg, const std::vector<SweepRecord> &records);

struct LabeledPoint
{
    int c = 0;
    std::size_t symbol = 0;
    std::complex<double> point;
};

/// Noiseless receive constellation of PMod: each symbol s appears scaled by
/// |h_0| for polarization 0 and by |h_1| for polarization 1.
std::vector<LabeledPoint> dump_hierarchical_constellation(const Matrix2c &H, const Constellation<double> &cst);

/// Writes fig1_constellation.csv and .svg into `dir`.
std::vector<std::filesystem::path> write_constellation_figure(const std::filesystem::path &dir,
                                                              const std::vector<LabeledPoint> &points);

} // namespace polmod
