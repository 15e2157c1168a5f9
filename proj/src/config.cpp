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

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

namespace polmod
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> items;
    while (true)
    {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty())
            items.push_back(item);
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return items;
}

double parse_double(std::string_view text)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw UsageError("not a number: '" + std::string(text) + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view text)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw UsageError("not a non-negative integer: '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text)
{
    text = trim(text);
    if (text == "true" || text == "yes" || text == "1" || text == "on")
        return true;
    if (text == "false" || text == "no" || text == "0" || text == "off")
        return false;
    throw UsageError("not a boolean: '" + std::string(text) + "'");
}

FadingModel parse_fading(std::string_view text)
{
    text = trim(text);
    if (text == "rayleigh")
        return FadingModel::rayleigh;
    if (text == "none" || text == "awgn")
        return FadingModel::none;
    throw UsageError("unknown fading model '" + std::string(text) + "'");
}

void apply_key(SweepConfig &cfg, const std::string &section, const std::string &key, std::string_view value)
{
    const std::string full = section + "." + key;
    if (full == "sweep.schemes")
    {
        cfg.schemes.clear();
        for (const auto item : split_list(value))
            cfg.schemes.push_back(parse_link_scheme(item));
    }
    else if (full == "sweep.modulation")
        cfg.modulation = parse_modulation(trim(value));
    else if (full == "sweep.ebn0_grid_db")
        cfg.ebn0_grid_db = parse_grid(value);
    else if (full == "sweep.xpd_grid_db")
        cfg.xpd_grid_db = parse_grid(value);
    else if (full == "sweep.block_len")
        cfg.block_len = int(parse_u64(value));
    else if (full == "sweep.master_seed")
        cfg.master_seed = parse_u64(value);
    else if (full == "channel.doppler_hz")
        cfg.channel.doppler_hz = parse_double(value);
    else if (full == "channel.symbol_rate_hz")
        cfg.channel.symbol_rate_hz = parse_double(value);
    else if (full == "channel.slow_fading_std_db")
        cfg.channel.slow_fading_std_db = parse_double(value);
    else if (full == "channel.fading")
        cfg.channel.fading = parse_fading(value);
    else if (full == "stop.min_errors")
        cfg.stop.min_errors = parse_u64(value);
    else if (full == "stop.max_bits")
        cfg.stop.max_bits = parse_u64(value);
    else if (full == "output.dir")
        cfg.output_dir = std::string(trim(value));
    else if (full == "output.csv")
        cfg.csv_name = std::string(trim(value));
    else if (full == "output.plots")
        cfg.plots = parse_bool(value);
    else
        throw UsageError("unknown key '" + key + "' in section [" + section + "]");
}

} // namespace

std::vector<double> parse_grid(std::string_view text)
{
    text = trim(text);
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos)
    {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string_view::npos)
            throw UsageError("range grid must be start:step:stop, got '" + std::string(text) + "'");
        const double start = parse_double(text.substr(0, a));
        const double step = parse_double(text.substr(a + 1, b - a - 1));
        const double stop = parse_double(text.substr(b + 1));
        if (!(step > 0.0) || stop < start)
            throw UsageError("range grid needs step > 0 and stop >= start");
        const auto n = std::size_t(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i)
            grid.push_back(start + double(i) * step);
        return grid;
    }
    for (const auto item : split_list(text))
        grid.push_back(parse_double(item));
    return grid;
}

void SweepConfig::validate() const
{
    if (schemes.empty())
        throw UsageError("config: no schemes selected");
    if (ebn0_grid_db.empty() || xpd_grid_db.empty())
        throw UsageError("config: grids must be non-empty");
    for (const auto *grid : {&ebn0_grid_db, &xpd_grid_db})
        for (std::size_t i = 1; i < grid->size(); ++i)
            if (!((*grid)[i] > (*grid)[i - 1]))
                throw UsageError("config: grids must be strictly increasing");
    if (block_len <= 0)
        throw UsageError("config: block_len must be positive");
    for (const auto s : schemes)
        if (s == LinkScheme::ostbc && block_len % 2 != 0)
            throw UsageError("config: ostbc needs an even block_len");
    if (stop.max_bits == 0)
        throw UsageError("config: stop.max_bits must be positive");
    ChannelConfig ch = channel;
    ch.block_len = block_len;
    ch.validate();
}

SweepConfig parse_config(std::istream &in)
{
    static const std::set<std::string> sections{"sweep", "channel", "stop", "output"};
    SweepConfig cfg;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        auto view = std::string_view(line);
        if (const auto hash = view.find_first_of("#;"); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        try
        {
            if (view.front() == '[')
            {
                if (view.back() != ']')
                    throw UsageError("malformed section header");
                section = std::string(trim(view.substr(1, view.size() - 2)));
                if (!sections.contains(section))
                    throw UsageError("unknown section [" + section + "]");
                continue;
            }
            const auto eq = view.find('=');
            if (eq == std::string_view::npos)
                throw UsageError("expected 'key = value'");
            if (section.empty())
                throw UsageError("key outside of any section");
            apply_key(cfg, section, std::string(trim(view.substr(0, eq))), view.substr(eq + 1));
        }
        catch (const UsageError &e)
        {
            throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.channel.block_len = cfg.block_len;
    cfg.validate();
    return cfg;
}

SweepConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path.string());
    return parse_config(in);
}

} // namespace polmod
