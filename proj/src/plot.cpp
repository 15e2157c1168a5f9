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

#include "polmod/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace polmod::plot
{

namespace
{

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr std::array<const char *, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string &s)
{
    std::string out;
    for (const char ch : s)
    {
        switch (ch)
        {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void pad()
    {
        if (!std::isfinite(lo))
        {
            lo = 0;
            hi = 1;
        }
        if (hi - lo < 1e-12)
        {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals
std::vector<double> nice_ticks(double lo, double hi, int target = 5)
{
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {2.0, 5.0, 10.0})
        if (raw > step * 1.5)
            step = m * mag;
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

} // namespace

std::string render_svg(const Axes &axes, const std::vector<Series> &series)
{
    auto ty = [&](double y) { return axes.log_y ? std::log10(y) : y; };

    Range xr, yr;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points)
        {
            if (axes.log_y && !(y > 0))
                continue;
            xr.add(x);
            yr.add(ty(y));
        }
    xr.pad();
    yr.pad();
    if (axes.log_y)
    {
        yr.lo = std::floor(yr.lo);
        yr.hi = std::ceil(yr.hi);
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    if (axes.equal_aspect)
    {
        const double span = std::max(xr.hi - xr.lo, yr.hi - yr.lo) * 1.1;
        const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
        const double sx = span * plot_w / std::min(plot_w, plot_h) / 2;
        const double sy = span * plot_h / std::min(plot_w, plot_h) / 2;
        xr = {cx - sx, cx + sx};
        yr = {cy - sy, cy + sy};
    }

    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kTop + (yr.hi - ty(y)) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(axes.title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks: rounded linear steps, decades on a log axis
    for (const double x : nice_ticks(xr.lo, xr.hi))
    {
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << kTop << "\" x2=\"" << px(x) << "\" y2=\"" << kTop + plot_h
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">" << fmt(x)
            << "</text>\n";
    }
    std::vector<double> yticks;
    if (axes.log_y)
        for (double e = yr.lo; e <= yr.hi + 1e-9; e += 1.0)
            yticks.push_back(std::pow(10.0, e));
    else
        yticks = nice_ticks(yr.lo, yr.hi);
    for (const double y : yticks)
    {
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << py(y)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fmt(y)
            << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
        << escape(axes.x_label) << "</text>\n";
    svg << "<text transform=\"translate(20," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(axes.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k)
    {
        const auto &s = series[k];
        const char *color = kColors[k % kColors.size()];
        std::ostringstream path;
        for (const auto &[x, y] : s.points)
        {
            if (axes.log_y && !(y > 0))
                continue;
            path << px(x) << "," << py(y) << " ";
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        if (!axes.markers_only)
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << path.str()
                << "\"/>\n";
        const double ly = kTop + 14 + 18 * double(k);
        svg << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
            << color << "\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly + 1 << "\">" << escape(s.name)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace polmod::plot
