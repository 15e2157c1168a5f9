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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polmod;

namespace
{
SweepConfig parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

SweepConfig small_config()
{
    SweepConfig cfg;
    cfg.schemes = {LinkScheme::pmod_mld, LinkScheme::pmod_nod};
    cfg.ebn0_grid_db = {4.0, 8.0};
    cfg.xpd_grid_db = {10.0, 26.215};
    cfg.stop = {100, 20000};
    cfg.master_seed = 99;
    return cfg;
}

std::filesystem::path scratch_dir(const std::string &name)
{
    auto dir = std::filesystem::temp_directory_path() / ("polmod_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}
} // namespace

TEST_CASE("config parsing")
{
    const auto cfg = parse(R"(
# comment
[sweep]
schemes = pmod_mld, single   ; trailing comment
modulation = qam16
ebn0_grid_db = 0:2.5:10
xpd_grid_db = 5, 15, 300
block_len = 50
master_seed = 7

[channel]
doppler_hz = 10
symbol_rate_hz = 2000
slow_fading_std_db = 2
fading = rayleigh

[stop]
min_errors = 42
max_bits = 1000000

[output]
dir = out/here
csv = a.csv
plots = no
)");
    CHECK(cfg.schemes == std::vector<LinkScheme>{LinkScheme::pmod_mld, LinkScheme::single});
    CHECK(cfg.modulation == ModulationKind::qam16);
    CHECK(cfg.ebn0_grid_db == std::vector<double>{0, 2.5, 5, 7.5, 10});
    CHECK(cfg.xpd_grid_db == std::vector<double>{5, 15, 300});
    CHECK(cfg.block_len == 50);
    CHECK(cfg.channel.block_len == 50);
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.channel.doppler_hz == 10);
    CHECK(cfg.channel.symbol_rate_hz == 2000);
    CHECK(cfg.channel.slow_fading_std_db == 2);
    CHECK(cfg.stop.min_errors == 42);
    CHECK(cfg.stop.max_bits == 1000000);
    CHECK(cfg.output_dir == std::filesystem::path("out/here"));
    CHECK(cfg.csv_name == "a.csv");
    CHECK_FALSE(cfg.plots);

    const auto defaults = parse("");
    CHECK(defaults.schemes.size() == 5);
    CHECK(defaults.stop.min_errors == 200);
    CHECK(defaults.stop.max_bits == 10'000'000);
}

TEST_CASE("config errors name the line")
{
    auto fails_with = [](const std::string &text, const std::string &needle) {
        try
        {
            parse(text);
        }
        catch (const UsageError &e)
        {
            CAPTURE(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            return;
        }
        FAIL("no error for: " << text);
    };
    fails_with("[sweep]\nbogus = 1\n", "line 2");
    fails_with("[sweep]\nbogus = 1\n", "bogus");
    fails_with("[nope]\n", "unknown section");
    fails_with("key = 1\n", "outside");
    fails_with("[sweep]\nschemes = pmod_mld, alamouti\n", "alamouti");
    fails_with("[sweep]\nebn0_grid_db = 4, 2\n", "increasing");
    fails_with("[sweep]\nblock_len = 51\n", "even");
    fails_with("[stop]\nmin_errors = -3\n", "line 2");
    fails_with("[channel]\nfading = rician\n", "rician");
    fails_with("[sweep]\nmodulation\n", "key = value");
}

TEST_CASE("grid parsing")
{
    CHECK(parse_grid("0:2:20").size() == 11);
    CHECK(parse_grid("0:2:20").back() == 20.0);
    CHECK(parse_grid("0:0.1:1").size() == 11);
    CHECK(parse_grid(" 1, 2 ,3 ") == std::vector<double>{1, 2, 3});
    CHECK(parse_grid("26.215") == std::vector<double>{26.215});
    CHECK_THROWS_AS(parse_grid("0:0:1"), UsageError);
    CHECK_THROWS_AS(parse_grid("3:1:1"), UsageError);
    CHECK_THROWS_AS(parse_grid("0:1"), UsageError);
    CHECK_THROWS_AS(parse_grid("a, b"), UsageError);
}

TEST_CASE("scheme names round trip")
{
    for (const auto s : {LinkScheme::pmod_mld, LinkScheme::pmod_nod, LinkScheme::single, LinkScheme::ostbc,
                         LinkScheme::vblast})
        CHECK(parse_link_scheme(to_string(s)) == s);
    CHECK_THROWS_AS(parse_link_scheme("pmod"), UsageError);
}

TEST_CASE("run_point is reproducible and independent of the worker count")
{
    const auto cfg = small_config();
    const auto a = run_point(cfg, LinkScheme::pmod_nod, 6.0, 10.0, 1);
    const auto b = run_point(cfg, LinkScheme::pmod_nod, 6.0, 10.0, 1);
    const auto c = run_point(cfg, LinkScheme::pmod_nod, 6.0, 10.0, 4);
    CHECK(a.counters == b.counters);
    CHECK(a.counters == c.counters);
    CHECK(a.counters.bits_error >= cfg.stop.min_errors);
    CHECK(a.counters.blocks_total * 300 == a.counters.bits_total);

    auto other = cfg;
    other.master_seed = 100;
    CHECK_FALSE(run_point(other, LinkScheme::pmod_nod, 6.0, 10.0, 1).counters == a.counters);
    CHECK_THROWS_AS(run_point(cfg, LinkScheme::pmod_nod, 6.0, 10.0, 0), UsageError);
}

TEST_CASE("stop rule: error target or bit budget")
{
    auto cfg = small_config();
    cfg.stop = {1'000'000, 30000};
    const auto r = run_point(cfg, LinkScheme::single, 4.0, 26.215, 1);
    // stops at the first whole block reaching the budget
    CHECK(r.counters.bits_total >= 30000);
    CHECK(r.counters.bits_total < 30000 + 200);
}

TEST_CASE("PMod MLD is nearly error-free at high SNR without fading")
{
    auto cfg = small_config();
    cfg.channel.fading = FadingModel::none;
    cfg.stop = {1000, 300000};
    const auto r = run_point(cfg, LinkScheme::pmod_mld, 40.0, 300.0, 1);
    CHECK(r.counters.bits_total >= 300000);
    CHECK(r.ber() < 1e-4);
}

TEST_CASE("queue counters of each scheme")
{
    auto cfg = small_config();
    cfg.stop = {200, 100000};
    const auto p = run_point(cfg, LinkScheme::pmod_mld, 6.0, 26.215, 1);
    CHECK(p.counters.hpq_total * 2 == p.counters.lpq_total);
    const auto s = run_point(cfg, LinkScheme::single, 6.0, 26.215, 1);
    CHECK(s.counters.hpq_total == 0);
    CHECK(s.counters.lpq_total == s.counters.bits_total);
}

TEST_CASE("sweep produces one record per grid point and a matching CSV")
{
    auto cfg = small_config();
    const auto records = run_sweep(cfg, 1);
    REQUIRE(records.size() == 2 * 2 * 2);
    CHECK(records[0].scheme == LinkScheme::pmod_mld);
    CHECK(records[0].xpd_db == 10.0);
    CHECK(records[1].ebn0_db == 8.0);
    CHECK(records[2].xpd_db == 26.215);

    const auto csv = to_csv(records);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "scheme,modulation,ebn0_db,xpd_db,ber,ber_hpq,ber_lpq,bler,blsr,bits,errors,seed");
    int rows = 0;
    while (std::getline(in, line))
    {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 11);
    }
    CHECK(rows == 8);
    CHECK(csv.find("pmod_nod,qpsk,8,26.215,") != std::string::npos);

    // rerunning the whole sweep gives byte-identical output
    CHECK(to_csv(run_sweep(cfg, 3)) == csv);
}

TEST_CASE("write_outputs creates the CSV and figures")
{
    auto cfg = small_config();
    cfg.output_dir = scratch_dir("outputs");
    const auto records = run_sweep(cfg, 1);
    const auto paths = write_outputs(cfg, records);
    for (const char *name : {"sweep.csv", "fig2_ber.csv", "fig2_ber.svg", "fig3_queues.csv", "fig3_queues.svg",
                             "fig4_xpd.csv", "fig4_xpd.svg"})
    {
        CAPTURE(name);
        CHECK(std::filesystem::exists(cfg.output_dir / name));
        CHECK(std::find(paths.begin(), paths.end(), cfg.output_dir / name) != paths.end());
    }
    std::ifstream svg(cfg.output_dir / "fig2_ber.svg");
    std::string first;
    std::getline(svg, first);
    CHECK(first.rfind("<svg", 0) == 0);

    cfg.plots = false;
    cfg.output_dir = scratch_dir("outputs_noplot");
    CHECK(write_outputs(cfg, records).size() == 1);
    std::filesystem::remove_all(scratch_dir("outputs"));
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("hierarchical constellation dump")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    Matrix2c H;
    H << std::complex<double>(0.8, 0.6), 0.0, 0.0, std::complex<double>(0.0, 0.5);
    const auto pts = dump_hierarchical_constellation(H, qpsk);
    REQUIRE(pts.size() == 8);
    for (const auto &p : pts)
    {
        const double radius = p.c == 0 ? 1.0 : 0.5;
        CHECK(std::abs(p.point) == doctest::Approx(radius));
        CHECK(std::abs(p.point - radius * qpsk[p.symbol]) < 1e-12);
    }
    const auto dir = scratch_dir("constellation");
    const auto files = write_constellation_figure(dir, pts);
    CHECK(files.size() == 2);
    CHECK(std::filesystem::exists(dir / "fig1_constellation.svg"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("BER falls with Eb/N0 and every record honours the stop rule")
{
    SweepConfig cfg;
    cfg.schemes = {LinkScheme::pmod_mld, LinkScheme::single, LinkScheme::ostbc, LinkScheme::vblast};
    cfg.ebn0_grid_db = {0, 5, 10, 15};
    cfg.stop = {500, 2'000'000};
    cfg.master_seed = 5;
    const auto records = run_sweep(cfg, 1);
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto &r = records[i];
        CAPTURE(to_string(r.scheme));
        CAPTURE(r.ebn0_db);
        CHECK((r.counters.bits_error >= cfg.stop.min_errors || r.counters.bits_total >= cfg.stop.max_bits));
        if (i > 0 && records[i - 1].scheme == r.scheme)
        {
            const double slack = r.counters.bits_error < 500 ? 2.0 : 1.0;
            CHECK(r.ber() <= slack * records[i - 1].ber());
        }
    }
}

TEST_CASE("AWGN BPSK at 10 dB against the closed form")
{
    SweepConfig cfg;
    cfg.schemes = {LinkScheme::single};
    cfg.modulation = ModulationKind::bpsk;
    cfg.channel.fading = FadingModel::none;
    cfg.channel.doppler_hz = 0.0;
    cfg.stop = {1'000'000, 20'000'000};
    cfg.master_seed = 3;
    const auto r = run_point(cfg, LinkScheme::single, 10.0, 300.0, 1);
    const double theory = 3.87210821939e-6; // Q(sqrt(20))
    const double sd = std::sqrt(theory / double(r.counters.bits_total));
    CHECK(std::abs(r.ber() - theory) <= 3.0 * sd);
}

TEST_CASE("constellation dump radii")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    Matrix2c H;
    H << 1.0, 0.0, 0.0, 2.0;
    for (const auto &p : dump_hierarchical_constellation(H, qpsk))
        CHECK(std::abs(p.point) == doctest::Approx(p.c == 0 ? 1.0 : 2.0));

    H << 0.6, 0.6, 0.8, 0.8;
    const auto same = dump_hierarchical_constellation(H, qpsk);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(same[i].point - same[i + 4].point) < 1e-15);

    RngStream stream(61, 0);
    for (int trial = 0; trial < 100; ++trial)
    {
        Matrix2c G;
        for (int k = 0; k < 4; ++k)
            G(k / 2, k % 2) = standard_complex_gaussian<double>(stream);
        for (const auto &p : dump_hierarchical_constellation(G, qpsk))
            CHECK(std::abs(std::abs(p.point) - G.col(p.c).norm()) < 1e-12);
    }
    H(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(dump_hierarchical_constellation(H, qpsk), UsageError);
}
