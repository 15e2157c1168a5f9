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

#include "polmod/channel.hpp"
#include "polmod/detectors.hpp"
#include "polmod/schemes.hpp"
#include "polmod/validation.hpp"

#include <doctest.h>

#include <vector>

using namespace polmod;
namespace val = polmod::validation;

namespace
{
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vector2c noise(RngStream &stream, double sigma2)
{
    return Vector2c(standard_complex_gaussian<double>(stream), standard_complex_gaussian<double>(stream)) *
           std::sqrt(sigma2);
}
} // namespace

TEST_CASE("MLD worked example")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    const Matrix2c H = Matrix2c::Identity();
    // (0, s_3) plus a small perturbation
    const Vector2c y(std::complex<double>(0.05, -0.02), qpsk[3] + std::complex<double>(0.1, 0.0));
    std::size_t visited = 0;
    const auto d = detect_pmod_mld<double>(y, H, qpsk, &visited);
    CHECK(d.c_hat == 1);
    CHECK(d.symbol_hat == 3);
    CHECK(visited == 8);
    CHECK(d.llr_c > 0.0);
    CHECK(d.metric == doctest::Approx(std::norm(y(0)) + 0.01));
}

TEST_CASE("MLD against the explicit-candidate oracle")
{
    RngStream stream(21, 0);
    for (const auto kind : {ModulationKind::bpsk, ModulationKind::qpsk, ModulationKind::qam16})
    {
        const auto cst = make_constellation<double>(kind);
        for (int trial = 0; trial < 2000; ++trial)
        {
            const Matrix2c H = val::random_channel(stream, 5.0);
            const std::size_t idx = std::size_t(stream() % cst.size());
            const int c = stream.bit();
            const Vector2c y = H.col(c) * cst[idx] + noise(stream, 0.3);
            std::size_t visited = 0;
            const auto fast = detect_pmod_mld<double>(y, H, cst, &visited);
            const auto ref = val::naive_pmod_mld(y, H, cst);
            REQUIRE(fast.c_hat == ref.c);
            REQUIRE(fast.symbol_hat == ref.symbol);
            CHECK(fast.metric == doctest::Approx(ref.metric).epsilon(1e-12));
            CHECK(visited == 2 * cst.size());
            CHECK(ref.candidates == 2 * cst.size());
        }
    }
}

TEST_CASE("likelihood ratio: symmetry and swap antisymmetry")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    RngStream stream(22, 0);
    for (int trial = 0; trial < 200; ++trial)
    {
        Matrix2c H = val::random_channel(stream);
        const Vector2c y = noise(stream, 1.0);
        const double llr = pmod_likelihood_ratio(y, H, qpsk, 0.5);
        Matrix2c swapped = H;
        swapped.col(0).swap(swapped.col(1));
        CHECK(pmod_likelihood_ratio(y, swapped, qpsk, 0.5) == doctest::Approx(-llr).epsilon(1e-12));

        H.col(1) = H.col(0);
        CHECK(pmod_likelihood_ratio(y, H, qpsk, 0.5) == 0.0);
    }
    CHECK_THROWS_AS(pmod_likelihood_ratio(Vector2c::Zero().eval(), Matrix2c::Identity().eval(), qpsk, 0.0),
                    UsageError);
}

TEST_CASE("likelihood ratio and combined signal against direct exponential sums")
{
    RngStream stream(23, 0);
    for (const auto kind : {ModulationKind::bpsk, ModulationKind::qpsk, ModulationKind::qam16})
    {
        const auto cst = make_constellation<double>(kind);
        for (int trial = 0; trial < 500; ++trial)
        {
            const Matrix2c H = val::random_channel(stream, 3.0);
            const double sigma2 = 0.2 + stream.uniform() * 2.0;
            const Vector2c y = H.col(stream.bit()) * cst[stream() % cst.size()] + noise(stream, sigma2);
            const double direct = val::direct_likelihood_ratio(y, H, cst, sigma2);
            const double llr = pmod_likelihood_ratio(y, H, cst, sigma2);
            CHECK(std::exp(llr) == doctest::Approx(direct).epsilon(1e-10));
            const auto r = pmod_combine(y, H, cst, sigma2).r;
            const auto r_direct = val::direct_combined_signal(y, H, cst, sigma2);
            CHECK(std::abs(r - r_direct) <= 1e-10 * std::max(1.0, std::abs(r_direct)));
        }
    }
}

TEST_CASE("polarization weights")
{
    for (const double llr : {-800.0, -30.0, -1.0, 0.0, 0.5, 30.0, 800.0})
    {
        const auto [w0, w1] = polarization_weights(llr);
        CHECK(w0 + w1 == 1.0);
        CHECK(w0 >= 0.0);
        CHECK(w1 >= 0.0);
        CHECK(w1 == doctest::Approx(1.0 / (1.0 + std::exp(-llr))));
    }
    const auto [a, b] = polarization_weights(0.0);
    CHECK(a == 0.5);
    CHECK(b == 0.5);
}

TEST_CASE("combining: worked examples")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    Matrix2c H;
    H << 1.0, 0.2, 0.1, 0.9;
    const Vector2c y(std::complex<double>(0.3, 0.1), std::complex<double>(-0.7, 0.6));

    // equal weights when both columns are the same
    Matrix2c same;
    same << 1.0, 1.0, 0.5, 0.5;
    const auto eq = pmod_combine<double>(y, same, qpsk, 0.1);
    CHECK(eq.w0 == 0.5);
    CHECK(std::abs(eq.r - 0.5 * (y(0) + y(1))) < 1e-15);
    CHECK(std::abs(eq.g_eff - std::complex<double>(0.75)) < 1e-15);

    // at high SNR the decision becomes hard and r picks the active branch
    const Vector2c y1 = H.col(1) * qpsk[2];
    const auto hard = pmod_combine<double>(y1, H, qpsk, 1e-4);
    CHECK(hard.w1 == doctest::Approx(1.0));
    CHECK(std::abs(hard.r - y1(1)) < 1e-9);
    CHECK(std::abs(hard.g_eff - H(1, 1)) < 1e-9);
}

TEST_CASE("NOD agrees with MLD at high SNR with well-separated polarizations")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    RngStream stream(24, 0);
    const double sigma2 = NoiseConfig{20.0, 3}.sigma2();
    const int n = 10000;
    int agree = 0;
    for (int i = 0; i < n; ++i)
    {
        Matrix2c H = Matrix2c::Zero();
        H(0, 0) = standard_complex_gaussian<double>(stream);
        H(1, 1) = standard_complex_gaussian<double>(stream);
        const Vector2c y = H.col(stream.bit()) * qpsk[stream() % 4] + noise(stream, sigma2);
        const auto m = detect_pmod_mld<double>(y, H, qpsk);
        const auto d = detect_pmod_nod<double>(y, H, qpsk, sigma2);
        agree += (m.c_hat == d.c_hat && m.symbol_hat == d.symbol_hat);
    }
    CHECK(double(agree) / n >= 0.99);
}

TEST_CASE("NOD polarization decision matches MLD when the hypotheses are far apart")
{
    const auto qam = make_constellation<double>(ModulationKind::qam16);
    RngStream stream(25, 0);
    int confident = 0;
    for (int i = 0; i < 5000; ++i)
    {
        const Matrix2c H = val::random_channel(stream, 10.0);
        const double sigma2 = 0.05;
        const Vector2c y = H.col(stream.bit()) * qam[stream() % 16] + noise(stream, sigma2);
        const auto d = detect_pmod_nod<double>(y, H, qam, sigma2);
        if (std::abs(d.llr_c) > 10.0)
        {
            ++confident;
            CHECK(detect_pmod_mld<double>(y, H, qam).c_hat == d.c_hat);
        }
    }
    CHECK(confident > 1000);
}

TEST_CASE("single-polarization detection")
{
    const auto qam = make_constellation<double>(ModulationKind::qam16);
    RngStream stream(26, 0);
    for (int i = 0; i < 1000; ++i)
    {
        const Matrix2c H = val::random_channel(stream);
        const Vector2c y = H.col(0) * qam[stream() % 16] + noise(stream, 0.1);
        const auto d = detect_single<double>(y, H, qam);
        // brute force over the alphabet
        std::size_t best = 0;
        for (std::size_t k = 1; k < 16; ++k)
            if ((y - H.col(0) * qam[k]).squaredNorm() < (y - H.col(0) * qam[best]).squaredNorm())
                best = k;
        CHECK(d == best);
        // invariant under a common complex scaling of y and H
        const std::complex<double> g(0.3, -1.7);
        CHECK(detect_single<double>((g * y).eval(), (g * H).eval(), qam) == d);
    }
    Matrix2c dead = Matrix2c::Identity();
    dead.col(0).setZero();
    CHECK_THROWS_AS(detect_single<double>(Vector2c::Zero().eval(), dead, qam), DegenerateChannelError);
}

TEST_CASE("OSTBC: noiseless reception of every symbol pair")
{
    RngStream stream(27, 0);
    for (const auto kind : {ModulationKind::bpsk, ModulationKind::qpsk, ModulationKind::qam16})
    {
        const auto cst = make_constellation<double>(kind);
        const Matrix2c H = val::random_channel(stream);
        for (std::size_t i = 0; i < cst.size(); ++i)
            for (std::size_t j = 0; j < cst.size(); ++j)
            {
                auto bits = cst.label(i);
                const auto second = cst.label(j);
                bits.insert(bits.end(), second.begin(), second.end());
                const auto w = encode_ostbc<double>(bits, cst);
                const Vector2c y1 = H * w.x[0], y2 = H * w.x[1];
                const auto stats = alamouti_combine<double>(y1, y2, H);
                CHECK(stats.gain == doctest::Approx(H.squaredNorm()));
                CHECK(std::abs(stats.z1 - stats.gain * kInvSqrt2 * cst[i]) < 1e-12);
                CHECK(std::abs(stats.z2 - stats.gain * kInvSqrt2 * cst[j]) < 1e-12);
                const auto d = detect_ostbc<double>(y1, y2, H, cst);
                CHECK(d[0] == i);
                CHECK(d[1] == j);
            }
    }
    CHECK_THROWS_AS(detect_ostbc<double>(Vector2c::Zero().eval(), Vector2c::Zero().eval(), Matrix2c::Zero().eval(),
                                         make_constellation<double>(ModulationKind::qpsk)),
                    DegenerateChannelError);
}

TEST_CASE("OSTBC per-symbol decisions equal joint ML over the pair")
{
    const auto qpsk = make_constellation<double>(ModulationKind::qpsk);
    RngStream stream(28, 0);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const Matrix2c H = val::random_channel(stream, 2.0);
        std::vector<std::uint8_t> bits(4);
        for (auto &b : bits)
            b = stream.bit();
        const auto w = encode_ostbc<double>(bits, qpsk);
        const Vector2c y1 = H * w.x[0] + noise(stream, 0.4);
        const Vector2c y2 = H * w.x[1] + noise(stream, 0.4);
        const auto d = detect_ostbc<double>(y1, y2, H, qpsk);

        double best = std::numeric_limits<double>::infinity();
        std::array<std::size_t, 2> joint{};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
            {
                auto cand = qpsk.label(i);
                const auto l2 = qpsk.label(j);
                cand.insert(cand.end(), l2.begin(), l2.end());
                const auto cw = encode_ostbc<double>(cand, qpsk);
                const double dist = (y1 - H * cw.x[0]).squaredNorm() + (y2 - H * cw.x[1]).squaredNorm();
                if (dist < best)
                {
                    best = dist;
                    joint = {i, j};
                }
            }
        CHECK(d == joint);
    }
}

TEST_CASE("VBLAST MMSE filter")
{
    RngStream stream(29, 0);
    for (int trial = 0; trial < 500; ++trial)
    {
        const Matrix2c H = val::random_channel(stream, 0.0);
        const double sigma2 = 0.01 + stream.uniform();
        const Matrix2c W = mmse_filter<double>(H, sigma2);
        CHECK((W - val::cofactor_mmse_filter(H, sigma2)).norm() <= 1e-12 * std::max(1.0, W.norm()));
        // zero-forcing limit
        const Matrix2c W0 = mmse_filter<double>(H, 1e-12);
        CHECK((W0 * H - Matrix2c::Identity()).norm() < 1e-6);
    }
    CHECK_THROWS_AS(mmse_filter<double>(Matrix2c::Identity().eval(), 0.0), UsageError);

    const auto qam = make_constellation<double>(ModulationKind::qam16);
    const Matrix2c H = val::random_channel(stream, 0.0);
    for (std::size_t i = 0; i < 16; ++i)
    {
        const std::size_t j = (i * 7 + 3) % 16;
        const Vector2c y = H * Vector2c(qam[i], qam[j]) * kInvSqrt2;
        const auto d = detect_vblast_mmse<double>(y, H, qam, 1e-9);
        CHECK(d[0] == i);
        CHECK(d[1] == j);
    }
}

TEST_CASE("detectors are deterministic")
{
    const auto qam = make_constellation<double>(ModulationKind::qam16);
    RngStream stream(30, 0);
    const Matrix2c H = val::random_channel(stream, 1.0);
    const Vector2c y = noise(stream, 1.0);
    const auto a = detect_pmod_nod<double>(y, H, qam, 0.3);
    const auto b = detect_pmod_nod<double>(y, H, qam, 0.3);
    CHECK(a.llr_c == b.llr_c);
    CHECK(a.symbol_hat == b.symbol_hat);
    CHECK(detect_vblast_mmse<double>(y, H, qam, 0.3) == detect_vblast_mmse<double>(y, H, qam, 0.3));
}
