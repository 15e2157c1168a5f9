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

// Reference implementations and end-to-end checks. The oracles here are
// written without the library's detector code paths (plain loops, direct
// exponential sums, cofactor inverses) so they can be used to cross-check it.

#include "polmod/harness.hpp"

#include <functional>
#include <optional>

namespace polmod::validation
{

// ---- oracles -------------------------------------------------------------

struct NaiveMldDecision
{
    int c = 0;
    std::size_t symbol = 0;
    double metric = 0.0;
    std::size_t candidates = 0;
};

/// Builds every transmit vector x in {(s,0), (0,s)} explicitly and scans |y - Hx|^2.
NaiveMldDecision naive_pmod_mld(const Vector2c &y, const Matrix2c &H, const Constellation<double> &cst);

/// Lambda(y) as a plain ratio of exponential sums. NaN or inf when both sums underflow.
double direct_likelihood_ratio(const Vector2c &y, const Matrix2c &H, const Constellation<double> &cst,
                               double sigma2);

/// Combined signal r from plain exponential sums.
std::complex<double> direct_combined_signal(const Vector2c &y, const Matrix2c &H, const Constellation<double> &cst,
                                            double sigma2);

/// (H^H H + 2 sigma2 I)^-1 H^H with the 2x2 inverse written out by cofactors.
Matrix2c cofactor_mmse_filter(const Matrix2c &H, double sigma2);

/// Gaussian tail probability Q(x).
double q_function(double x);

/// Random channel with CN(0,1) co-polar and CN(0, 10^(-iso/10)) cross-polar entries.
Matrix2c random_channel(RngStream &stream, double isolation_db = 0.0);

// ---- acceptance criteria -------------------------------------------------

struct CheckResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Knobs for the simulation-backed criteria. Defaults are the acceptance settings.
struct AcceptanceOptions
{
    int workers = 1;
    std::uint64_t seed = 20260101;
    std::uint64_t min_errors = 20000; ///< per BER point of the scheme-comparison sweep
    std::uint64_t max_bits = 100'000'000;
    std::uint64_t xpd_blocks = 20000; ///< blocks per point of the XPD sweep
    double xpd_ebn0_db = 10.0;
    std::ostream *log = nullptr;
};

/// Eb/N0 at which a scheme's BER curve crosses `target_ber`, by log-linear
/// interpolation between the bracketing grid points. Points are simulated in
/// increasing Eb/N0 and the scan stops at the first point below the target.
struct Crossing
{
    std::optional<double> ebn0_db;
    std::vector<SweepRecord> points;
};
Crossing ebn0_at_ber(const SweepConfig &cfg, LinkScheme scheme, double target_ber, int workers,
                     std::ostream *log = nullptr);

/// The fading environment used by the scheme-comparison criteria.
SweepConfig reference_environment(const AcceptanceOptions &opt);

CheckResult check_mld_nod_gap(const AcceptanceOptions &opt);         // 1
CheckResult check_scheme_ordering(const AcceptanceOptions &opt);     // 2
CheckResult check_queue_hierarchy(const AcceptanceOptions &opt);     // 3
CheckResult check_xpd_robustness(const AcceptanceOptions &opt);      // 4
CheckResult check_mld_oracle(const AcceptanceOptions &opt);          // 5
CheckResult check_awgn_anchor(const AcceptanceOptions &opt);         // 6
CheckResult check_channel_statistics(const AcceptanceOptions &opt);  // 7
CheckResult check_numerical_stability(const AcceptanceOptions &opt); // 8
CheckResult check_determinism(const AcceptanceOptions &opt);         // 9

struct NamedCheck
{
    int id;
    const char *name;
    bool slow; ///< runs a long fading simulation
    std::function<CheckResult(const AcceptanceOptions &)> run;
};

const std::vector<NamedCheck> &acceptance_checks();

std::string format_result(const CheckResult &r);

} // namespace polmod::validation
