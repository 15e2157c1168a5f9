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

// Figure recipes written next to the sweep CSV:
//   fig2_ber      BER against Eb/N0, one series per scheme (and XPD if several)
//   fig3_queues   HPQ and LPQ BER of the PMod receivers
//   fig4_xpd      BLSR ratio to the highest-isolation point, against XPD
//   fig1_constellation  written by write_constellation_figure

#include "polmod/harness.hpp"
#include "polmod/plot.hpp"

#include <cstdio>
#include <fstream>
#include <map>

namespace polmod
{

namespace
{

void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool is_pmod(LinkScheme s) { return s == LinkScheme::pmod_mld || s == LinkScheme::pmod_nod; }

std::string series_name(const SweepRecord &r, bool with_xpd)
{
    std::string name(to_string(r.scheme));
    if (with_xpd)
        name += " @" + num(r.xpd_db) + "dB";
    return name;
}

} // namespace

std::vector<std::filesystem::path> write_outputs(const SweepConfig &cfg, const std::vector<SweepRecord> &records)
{
    std::vector<std::filesystem::path> written;
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

    const auto csv_path = cfg.output_dir / cfg.csv_name;
    write_file(csv_path, to_csv(records));
    written.push_back(csv_path);
    if (!cfg.plots)
        return written;

    const bool many_xpd = cfg.xpd_grid_db.size() > 1;

    if (cfg.ebn0_grid_db.size() > 1)
    {
        std::map<std::string, plot::Series> ber;
        std::string csv = "scheme,xpd_db,ebn0_db,ber\n";
        for (const auto &r : records)
        {
            auto &s = ber[series_name(r, many_xpd)];
            s.name = series_name(r, many_xpd);
            s.points.emplace_back(r.ebn0_db, r.ber());
            csv += std::string(to_string(r.scheme)) + "," + num(r.xpd_db) + "," + num(r.ebn0_db) + "," +
                   num(r.ber()) + "\n";
        }
        std::vector<plot::Series> series;
        for (auto &[_, s] : ber)
            series.push_back(std::move(s));
        write_file(cfg.output_dir / "fig2_ber.csv", csv);
        write_file(cfg.output_dir / "fig2_ber.svg",
                   plot::render_svg({"BER against Eb/N0", "Eb/N0 [dB]", "BER", true}, series));
        written.push_back(cfg.output_dir / "fig2_ber.csv");
        written.push_back(cfg.output_dir / "fig2_ber.svg");

        std::map<std::string, plot::Series> queues;
        std::string qcsv = "scheme,xpd_db,ebn0_db,ber_hpq,ber_lpq\n";
        for (const auto &r : records)
        {
            if (!is_pmod(r.scheme))
                continue;
            const auto base = series_name(r, many_xpd);
            queues[base + " HPQ"].name = base + " HPQ";
            queues[base + " HPQ"].points.emplace_back(r.ebn0_db, r.ber_hpq());
            queues[base + " LPQ"].name = base + " LPQ";
            queues[base + " LPQ"].points.emplace_back(r.ebn0_db, r.ber_lpq());
            qcsv += std::string(to_string(r.scheme)) + "," + num(r.xpd_db) + "," + num(r.ebn0_db) + "," +
                    num(r.ber_hpq()) + "," + num(r.ber_lpq()) + "\n";
        }
        if (!queues.empty())
        {
            std::vector<plot::Series> series_q;
            for (auto &[_, s] : queues)
                series_q.push_back(std::move(s));
            write_file(cfg.output_dir / "fig3_queues.csv", qcsv);
            write_file(cfg.output_dir / "fig3_queues.svg",
                       plot::render_svg({"PMod queue BER", "Eb/N0 [dB]", "BER", true}, series_q));
            written.push_back(cfg.output_dir / "fig3_queues.csv");
            written.push_back(cfg.output_dir / "fig3_queues.svg");
        }
    }

    if (many_xpd)
    {
        // reference: the same scheme and Eb/N0 at the highest isolation in the grid
        const double ref_xpd = cfg.xpd_grid_db.back();
        std::map<std::pair<int, double>, double> reference;
        for (const auto &r : records)
            if (r.xpd_db == ref_xpd)
                reference[{int(r.scheme), r.ebn0_db}] = r.blsr();

        std::map<std::string, plot::Series> gain;
        std::string csv = "scheme,ebn0_db,xpd_db,blsr,blsr_reference,gain_degradation\n";
        for (const auto &r : records)
        {
            const auto it = reference.find({int(r.scheme), r.ebn0_db});
            if (it == reference.end() || !(it->second > 0.0))
                continue;
            const double g = gain_degradation(r.blsr(), it->second);
            const auto name = std::string(to_string(r.scheme)) + " @" + num(r.ebn0_db) + "dB";
            gain[name].name = name;
            gain[name].points.emplace_back(r.xpd_db, g);
            csv += std::string(to_string(r.scheme)) + "," + num(r.ebn0_db) + "," + num(r.xpd_db) + "," +
                   num(r.blsr()) + "," + num(it->second) + "," + num(g) + "\n";
        }
        std::vector<plot::Series> series;
        for (auto &[_, s] : gain)
        {
            // keep the ideal-isolation reference off the plot's x range
            std::erase_if(s.points, [&](const auto &p) { return p.first == ref_xpd && ref_xpd > 100.0; });
            series.push_back(std::move(s));
        }
        write_file(cfg.output_dir / "fig4_xpd.csv", csv);
        write_file(cfg.output_dir / "fig4_xpd.svg",
                   plot::render_svg({"Gain degradation against XPD", "isolation [dB]", "BLSR / BLSR(ideal)", false},
                                    series));
        written.push_back(cfg.output_dir / "fig4_xpd.csv");
        written.push_back(cfg.output_dir / "fig4_xpd.svg");
    }
    return written;
}

std::vector<std::filesystem::path> write_constellation_figure(const std::filesystem::path &dir,
                                                              const std::vector<LabeledPoint> &points)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    std::string csv = "c,symbol,re,im,radius\n";
    std::vector<plot::Series> series(2);
    series[0].name = "c = 0";
    series[1].name = "c = 1";
    for (const auto &p : points)
    {
        csv += std::to_string(p.c) + "," + std::to_string(p.symbol) + "," + num(p.point.real()) + "," +
               num(p.point.imag()) + "," + num(std::abs(p.point)) + "\n";
        series[std::size_t(p.c)].points.emplace_back(p.point.real(), p.point.imag());
    }
    plot::Axes axes{"Hierarchical PMod constellation", "in-phase", "quadrature", false, true, true};
    write_file(dir / "fig1_constellation.csv", csv);
    write_file(dir / "fig1_constellation.svg", plot::render_svg(axes, series));
    return {dir / "fig1_constellation.csv", dir / "fig1_constellation.svg"};
}

} // namespace polmod
