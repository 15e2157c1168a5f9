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

#include <string>
#include <utility>
#include <vector>

namespace polmod::plot
{

struct Series
{
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Axes
{
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    bool markers_only = false; // scatter instead of polyline
    bool equal_aspect = false;
};

/// Minimal standalone SVG line/scatter chart.
std::string render_svg(const Axes &axes, const std::vector<Series> &series);

} // namespace polmod::plot
