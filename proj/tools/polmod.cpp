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
#include "polmod/validation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <thread>

namespace
{

// "re" or "re,im"
std::complex<double> parse_complex(const std::string &text)
{
    const auto comma = text.find(',');
    try
    {
        if (comma == std::string::npos)
            return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    }
    catch (const std::exception &)
    {
        throw polmod::UsageError("cannot parse complex value '" + text + "' (expected re or re,im)");
    }
}

int run_command(const std::string &config_path, const std::string &out_dir, std::optional<std::uint64_t> seed,
                int workers)
{
    auto cfg = polmod::load_config(config_path);
    if (!out_dir.empty())
        cfg.output_dir = out_dir;
    if (seed)
        cfg.master_seed = *seed;

    const auto start = std::chrono::steady_clock::now();
    std::vector<polmod::SweepRecord> records;
    for (const auto scheme : cfg.schemes)
        for (const double xpd : cfg.xpd_grid_db)
            for (const double ebn0 : cfg.ebn0_grid_db)
            {
                records.push_back(polmod::run_point(cfg, scheme, ebn0, xpd, workers));
                const auto &r = records.back();
                std::cerr << polmod::to_string(scheme) << "  Eb/N0 " << ebn0 << " dB  XPD " << xpd << " dB  BER "
                          << r.ber() << "  BLSR " << r.blsr() << "  (" << r.counters.bits_total << " bits)\n";
            }
    const auto paths = polmod::write_outputs(cfg, records);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto &p : paths)
        std::cout << p.string() << "\n";
    std::cerr << records.size() << " points in " << secs << " s\n";
    return 0;
}

int constellation_command(const std::array<std::string, 4> &h, const std::string &modulation,
                          const std::string &out_dir)
{
    polmod::Matrix2c H;
    H << parse_complex(h[0]), parse_complex(h[1]), parse_complex(h[2]), parse_complex(h[3]);
    const auto cst = polmod::make_constellation<double>(polmod::parse_modulation(modulation));
    const auto points = polmod::dump_hierarchical_constellation(H, cst);
    std::cout << "c,symbol,re,im,radius\n";
    for (const auto &p : points)
        std::cout << p.c << "," << p.symbol << "," << p.point.real() << "," << p.point.imag() << ","
                  << std::abs(p.point) << "\n";
    if (!out_dir.empty())
        for (const auto &path : polmod::write_constellation_figure(out_dir, points))
            std::cerr << "wrote " << path.string() << "\n";
    return 0;
}

int validate_command(bool full, int workers, std::uint64_t seed, const std::vector<int> &only)
{
    polmod::validation::AcceptanceOptions opt;
    opt.workers = workers;
    opt.seed = seed;
    opt.log = &std::cerr;
    int failed = 0;
    for (const auto &check : polmod::validation::acceptance_checks())
    {
        const bool selected = only.empty() ? (full || !check.slow)
                                           : std::find(only.begin(), only.end(), check.id) != only.end();
        if (!selected)
            continue;
        const auto result = check.run(opt);
        std::cout << polmod::validation::format_result(result) << std::endl;
        failed += !result.passed;
    }
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"polmod: polarized modulation link-level simulator"};
    app.require_subcommand(1);

    const int default_workers = int(std::max(1U, std::thread::hardware_concurrency()));

    auto *run = app.add_subcommand("run", "Run an Eb/N0 x XPD sweep from a config file");
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    int workers = default_workers;
    run->add_option("--config", config_path, "Sweep configuration file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    run->add_option("--seed", seed, "Master seed (overrides [sweep] master_seed)");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    auto *cons = app.add_subcommand("constellation", "Print the hierarchical PMod receive constellation");
    std::array<std::string, 4> h{"1", "0", "0", "1"};
    std::string modulation = "qpsk", cons_out;
    cons->add_option("--h00", h[0], "H(0,0) as re or re,im");
    cons->add_option("--h01", h[1], "H(0,1) as re or re,im");
    cons->add_option("--h10", h[2], "H(1,0) as re or re,im");
    cons->add_option("--h11", h[3], "H(1,1) as re or re,im");
    cons->add_option("--modulation", modulation, "bpsk, qpsk or qam16");
    cons->add_option("--out", cons_out, "Directory for fig1_constellation.{csv,svg}");

    auto *val = app.add_subcommand("validate", "Run the oracle and invariant checks");
    bool full = false;
    std::uint64_t val_seed = polmod::validation::AcceptanceOptions{}.seed;
    std::vector<int> only;
    int val_workers = default_workers;
    val->add_flag("--full", full, "Also run the long fading simulations");
    val->add_option("--only", only, "Run only these criterion ids");
    val->add_option("--seed", val_seed, "Seed for the checks");
    val->add_option("--workers", val_workers, "Worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return run_command(config_path, out_dir, seed, workers);
        if (*cons)
            return constellation_command(h, modulation, cons_out);
        if (*val)
            return validate_command(full, val_workers, val_seed, only);
    }
    catch (const polmod::UsageError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
