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

#include "polmod/constellation.hpp"

#include <array>

namespace polmod
{

template <typename T>
struct DetectionResult
{
    int c_hat = 0;                ///< detected transmit polarization
    std::size_t symbol_hat = 0;   ///< detected symbol index
    T llr_c = T(0);               ///< log of P(c=1|y) / P(c=0|y); c_hat = 1 iff llr_c > 0
    T metric = T(0);              ///< decision metric of the chosen hypothesis
};

/// Posterior-weighted combination of the two receive branches.
template <typename T>
struct CombinedSignal
{
    std::complex<T> r;
    std::complex<T> g_eff; ///< gain such that r = g_eff * s + noise under the detected polarization
    T w0 = T(0.5);
    T w1 = T(0.5);
};

namespace detail
{
inline constexpr std::size_t kMaxConstellationSize = 64;

template <typename T>
void check_sigma2(T sigma2, const char *what)
{
    if (!(sigma2 > T(0)))
        throw UsageError(std::string(what) + ": noise variance must be positive");
}

template <typename T>
void check_size(const Constellation<T> &cst)
{
    if (cst.size() > kMaxConstellationSize)
        throw UsageError("constellation too large for the soft detectors");
}

/// log sum_s exp(-|y - h s|^2 / sigma2) over the alphabet.
template <typename T>
T log_branch_likelihood(const Complex2Vector<T> &y, const Complex2Vector<T> &h, const Constellation<T> &cst,
                        T sigma2)
{
    std::array<T, kMaxConstellationSize> terms;
    for (std::size_t i = 0; i < cst.size(); ++i)
        terms[i] = -(y - h * cst[i]).squaredNorm() / sigma2;
    return log_sum_exp(std::span<const T>(terms.data(), cst.size()));
}
} // namespace detail

/*!
 * Maximum-likelihood PMod detection.
 *
 * Exhaustive search over the 2^(b+1) candidates (s, 0)^T and (0, s)^T, i.e.
 * argmin over (c, s) of |y - h_c s|^2. Ties go to the lower c, then the lower
 * symbol index. llr_c holds the max-log difference of the two polarization
 * hypotheses (unit noise variance); metric is the minimal squared distance.
 *
 * If `candidates_evaluated` is given it receives the number of candidates
 * visited.
 */
template <typename T>
DetectionResult<T> detect_pmod_mld(const Complex2Vector<T> &y, const Complex2x2<T> &H, const Constellation<T> &cst,
                                   std::size_t *candidates_evaluated = nullptr)
{
    DetectionResult<T> out;
    std::array<T, 2> best_per_c{std::numeric_limits<T>::infinity(), std::numeric_limits<T>::infinity()};
    std::size_t visited = 0;
    out.metric = std::numeric_limits<T>::infinity();
    for (int c = 0; c < 2; ++c)
    {
        const Complex2Vector<T> h = H.col(c);
        for (std::size_t i = 0; i < cst.size(); ++i)
        {
            const T d = (y - h * cst[i]).squaredNorm();
            ++visited;
            if (d < best_per_c[c])
                best_per_c[c] = d;
            if (d < out.metric)
            {
                out.metric = d;
                out.c_hat = c;
                out.symbol_hat = i;
            }
        }
    }
    out.llr_c = best_per_c[0] - best_per_c[1];
    if (candidates_evaluated)
        *candidates_evaluated = visited;
    return out;
}

/// log Lambda(y) = log sum_s exp(-|y - h1 s|^2/sigma2) - log sum_s exp(-|y - h0 s|^2/sigma2).
template <typename T>
T pmod_likelihood_ratio(const Complex2Vector<T> &y, const Complex2x2<T> &H, const Constellation<T> &cst, T sigma2)
{
    detail::check_sigma2(sigma2, "pmod_likelihood_ratio");
    detail::check_size(cst);
    return detail::log_branch_likelihood<T>(y, H.col(1), cst, sigma2) -
           detail::log_branch_likelihood<T>(y, H.col(0), cst, sigma2);
}

/// Polarization posteriors as normalized weights; the larger one is computed
/// directly so that w0 + w1 == 1 holds exactly.
template <typename T>
std::pair<T, T> polarization_weights(T llr_c)
{
    if (llr_c > T(0))
    {
        const T w1 = T(1) / (T(1) + std::exp(-llr_c));
        return {T(1) - w1, w1};
    }
    const T w0 = T(1) / (T(1) + std::exp(llr_c));
    return {w0, T(1) - w0};
}

namespace detail
{
template <typename T>
CombinedSignal<T> combine_with_llr(const Complex2Vector<T> &y, const Complex2x2<T> &H, T llr_c)
{
    CombinedSignal<T> out;
    std::tie(out.w0, out.w1) = polarization_weights(llr_c);
    const int c_hat = llr_c > T(0) ? 1 : 0;
    out.r = out.w0 * y(0) + out.w1 * y(1);
    out.g_eff = out.w0 * H(0, c_hat) + out.w1 * H(1, c_hat);
    return out;
}
} // namespace detail

/*!
 * Weighted combining r = w0 y0 + w1 y1 with w_c the posterior of polarization
 * c. The polarization posteriors weight the receive branches of matching
 * index. g_eff applies the same weights to the detected column of H.
 */
template <typename T>
CombinedSignal<T> pmod_combine(const Complex2Vector<T> &y, const Complex2x2<T> &H, const Constellation<T> &cst,
                               T sigma2)
{
    return detail::combine_with_llr(y, H, pmod_likelihood_ratio(y, H, cst, sigma2));
}

/// Near-optimal PMod detection: polarization from the sign of the
/// likelihood ratio, symbol from the combined signal.
template <typename T>
DetectionResult<T> detect_pmod_nod(const Complex2Vector<T> &y, const Complex2x2<T> &H, const Constellation<T> &cst,
                                   T sigma2)
{
    DetectionResult<T> out;
    out.llr_c = pmod_likelihood_ratio(y, H, cst, sigma2);
    out.c_hat = out.llr_c > T(0) ? 1 : 0;
    const auto combined = detail::combine_with_llr(y, H, out.llr_c);
    out.metric = std::numeric_limits<T>::infinity();
    for (std::size_t i = 0; i < cst.size(); ++i)
    {
        const T d = std::norm(combined.r - combined.g_eff * cst[i]);
        if (d < out.metric)
        {
            out.metric = d;
            out.symbol_hat = i;
        }
    }
    return out;
}

/// Single-polarization ML: argmin_s |y - h0 s|^2 over both receive branches.
template <typename T>
std::size_t detect_single(const Complex2Vector<T> &y, const Complex2x2<T> &H, const Constellation<T> &cst)
{
    const Complex2Vector<T> h0 = H.col(0);
    if (h0.squaredNorm() == T(0))
        throw DegenerateChannelError("detect_single: polarization 0 has zero gain");
    std::size_t best = 0;
    T best_dist = std::numeric_limits<T>::infinity();
    for (std::size_t i = 0; i < cst.size(); ++i)
    {
        const T d = (y - h0 * cst[i]).squaredNorm();
        if (d < best_dist)
        {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

template <typename T>
struct AlamoutiStatistics
{
    std::complex<T> z1, z2;
    T gain; ///< squared Frobenius norm of H
};

/// Alamouti combining over two receive branches. With the 1/sqrt(2) transmit
/// scaling, z_k = gain / sqrt(2) * s_k + noise of variance gain * sigma2.
template <typename T>
AlamoutiStatistics<T> alamouti_combine(const Complex2Vector<T> &y1, const Complex2Vector<T> &y2,
                                       const Complex2x2<T> &H)
{
    AlamoutiStatistics<T> out;
    out.z1 = out.z2 = std::complex<T>(0);
    for (int j = 0; j < 2; ++j)
    {
        out.z1 += std::conj(H(j, 0)) * y1(j) + H(j, 1) * std::conj(y2(j));
        out.z2 += std::conj(H(j, 1)) * y1(j) - H(j, 0) * std::conj(y2(j));
    }
    out.gain = H.squaredNorm();
    return out;
}

/// OSTBC reception; orthogonality of the code makes per-symbol demapping joint ML.
template <typename T>
std::array<std::size_t, 2> detect_ostbc(const Complex2Vector<T> &y1, const Complex2Vector<T> &y2,
                                        const Complex2x2<T> &H, const Constellation<T> &cst)
{
    const auto stats = alamouti_combine(y1, y2, H);
    if (stats.gain == T(0))
        throw DegenerateChannelError("detect_ostbc: all-zero channel");
    const T scale = std::sqrt(T(2)) / stats.gain;
    return {nearest_symbol(cst, stats.z1 * scale), nearest_symbol(cst, stats.z2 * scale)};
}

/// Linear MMSE filter for two half-power streams: (H^H H + 2 sigma2 I)^-1 H^H.
template <typename T>
Complex2x2<T> mmse_filter(const Complex2x2<T> &H, T sigma2)
{
    detail::check_sigma2(sigma2, "mmse_filter");
    const Complex2x2<T> gram = H.adjoint() * H + T(2) * sigma2 * Complex2x2<T>::Identity();
    return gram.inverse() * H.adjoint();
}

/// VBLAST without successive cancellation: per-stream demapping of sqrt(2) W y.
template <typename T>
std::array<std::size_t, 2> detect_vblast_mmse(const Complex2Vector<T> &y, const Complex2x2<T> &H,
                                              const Constellation<T> &cst, T sigma2)
{
    const Complex2Vector<T> z = std::sqrt(T(2)) * (mmse_filter(H, sigma2) * y);
    return {nearest_symbol(cst, z(0)), nearest_symbol(cst, z(1))};
}

} // namespace polmod
