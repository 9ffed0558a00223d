// Copyright 2026 The fockgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file
 * Closed-form fidelities and success probabilities for uniform schedules
 * (every cycle at the same tau). These do not call into protocol.hpp; they are
 * evaluated straight from the coherent-state Fock weights and the reduction
 * coefficients, and serve as an independent check on the cycle engine.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <variant>

#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"
#include "fockgen/jc_kernel.hpp"
#include "fockgen/schedule.hpp"

namespace fockgen {

/// Amplitude <k|alpha> = exp(-|alpha|^2/2) alpha^k / sqrt(k!), log-space.
inline Complex coherent_amplitude(Complex alpha, std::size_t k) {
    const double r = std::abs(alpha);
    if (r == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    const double kd = static_cast<double>(k);
    const double log_mag = -0.5 * r * r + kd * std::log(r) - 0.5 * std::lgamma(kd + 1.0);
    return std::polar(std::exp(log_mag), kd * std::arg(alpha));
}

/// Poisson weight e^{-mean} mean^k / k!.
inline double poisson_weight(double mean, std::size_t k) {
    if (mean == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    const double kd = static_cast<double>(k);
    return std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

/// F_+ and F_- for targets c0|0> +/- cn|n> (or the two-mode analogue), with P(N).
struct FidelityPair {
    double plus = 0.0;
    double minus = 0.0;
    double success = 1.0;
};

namespace detail {

inline std::size_t closed_form_truncation(Complex alpha, std::size_t n,
                                          std::optional<std::size_t> K) {
    return K.value_or(default_truncation(std::norm(alpha), n + 2));
}

} // namespace detail

/// P_i(N) = sum_k |lambda_k(tau)|^{2N} p_k for a coherent initial state.
inline double success_closed_form(Level level, int cycles, double tau, const SystemParams &params,
                                  Complex alpha, std::optional<std::size_t> K = {}) {
    const std::size_t dim = detail::closed_form_truncation(alpha, 0, K);
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        acc += std::norm(coherent_amplitude(alpha, k)) *
               std::pow(std::norm(reduction_coefficient(level, k, tau, params)), cycles);
    }
    return acc;
}

/// F(N) = |alpha_n|^2 |lambda_n|^{2N} / sum_k |alpha_k|^2 |lambda_k|^{2N}, excited-level cycles.
inline double fock_fidelity_closed_form(std::size_t n, int cycles, double tau,
                                        const SystemParams &params, Complex alpha,
                                        std::optional<std::size_t> K = {}) {
    const std::size_t dim = detail::closed_form_truncation(alpha, n, K);
    if (n >= dim) {
        throw DimensionMismatch("target index outside truncation");
    }
    const double numerator =
        std::norm(coherent_amplitude(alpha, n)) *
        std::pow(std::norm(reduction_coefficient(Level::excited, n, tau, params)), cycles);
    return numerator / success_closed_form(Level::excited, cycles, tau, params, alpha, dim);
}

/**
 * F_+/- for c0|0> +/- cn|n> after N ground-level cycles:
 *   [c0^2 p0 |l0|^{2N} + cn^2 pn |ln|^{2N} +/- 2 Re(c0 cn C_n0 (ln l0*)^N)] / P_g(N)
 * which at delta = 0 is the familiar cos^{2N} / cos^N form.
 */
inline FidelityPair superposed_fidelity_closed_form(const SuperposedTarget &target, int cycles,
                                                    double tau, const SystemParams &params,
                                                    Complex alpha,
                                                    std::optional<std::size_t> K = {}) {
    validate(TargetSpec{target});
    const std::size_t dim = detail::closed_form_truncation(alpha, target.n, K);
    if (target.n >= dim) {
        throw DimensionMismatch("target index outside truncation");
    }
    const Complex a0 = coherent_amplitude(alpha, 0);
    const Complex an = coherent_amplitude(alpha, target.n);
    const Complex l0 = reduction_coefficient(Level::ground, 0, tau, params);
    const Complex ln = reduction_coefficient(Level::ground, target.n, tau, params);
    const double P = success_closed_form(Level::ground, cycles, tau, params, alpha, dim);
    const double diag = target.c0 * target.c0 * std::norm(a0) * std::pow(std::norm(l0), cycles) +
                        target.cn * target.cn * std::norm(an) * std::pow(std::norm(ln), cycles);
    const Complex coherence = an * std::conj(a0) * std::pow(ln * std::conj(l0), cycles);
    const double cross = 2.0 * target.c0 * target.cn * coherence.real();
    return {(diag + cross) / P, (diag - cross) / P, P};
}

/// Two-mode analogue for c00|00> +/- cmn|mn> from the product |alpha>|beta>.
inline FidelityPair bell_fidelity_closed_form(const BellTarget &target, int cycles, double tau,
                                              const TwoModeParams &params, Complex alpha,
                                              Complex beta, std::optional<Truncation> dims = {}) {
    validate(TargetSpec{target});
    const Truncation t = dims.value_or(
        Truncation{default_truncation(std::norm(alpha), target.m + 2),
                   default_truncation(std::norm(beta), target.n + 2)});
    if (target.m >= t.dim_a || target.n >= t.dim_b) {
        throw DimensionMismatch("target index outside truncation");
    }
    double P = 0.0;
    for (std::size_t k = 0; k < t.dim_a; ++k) {
        const double pa = std::norm(coherent_amplitude(alpha, k));
        for (std::size_t kp = 0; kp < t.dim_b; ++kp) {
            P += pa * std::norm(coherent_amplitude(beta, kp)) *
                 std::pow(std::norm(two_mode_coefficient(k, kp, tau, params)), cycles);
        }
    }
    const Complex a00 = coherent_amplitude(alpha, 0) * coherent_amplitude(beta, 0);
    const Complex amn = coherent_amplitude(alpha, target.m) * coherent_amplitude(beta, target.n);
    const Complex l00 = two_mode_coefficient(0, 0, tau, params);
    const Complex lmn = two_mode_coefficient(target.m, target.n, tau, params);
    const double diag =
        target.c00 * target.c00 * std::norm(a00) * std::pow(std::norm(l00), cycles) +
        target.cmn * target.cmn * std::norm(amn) * std::pow(std::norm(lmn), cycles);
    const Complex coherence = amn * std::conj(a00) * std::pow(lmn * std::conj(l00), cycles);
    const double cross = 2.0 * target.c00 * target.cmn * coherence.real();
    return {(diag + cross) / P, (diag - cross) / P, P};
}

/**
 * Large-N success probability: the initial weight of the target support,
 * ignoring higher stabilized indices.
 *   |n>               e^{-n} n^n / n!
 *   c0|0> + cn|n>     exp[-(|cn| sqrt(n!)/|c0|)^{2/n}] / |c0|^2
 *   c00|00> + cmn|mn> exp[-(|cmn| n!/|c00|)^{1/n} - (|cmn| m!/|c00|)^{1/m}] / |c00|^2
 */
inline double asymptotic_success(const TargetSpec &target) {
    validate(target);
    return std::visit(
        [](const auto &t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, FockTarget>) {
                return poisson_weight(static_cast<double>(t.n), t.n);
            } else if constexpr (std::is_same_v<T, SuperposedTarget>) {
                const double nd = static_cast<double>(t.n);
                const double log_ratio = std::log(std::abs(t.cn) / std::abs(t.c0)) +
                                         0.5 * std::lgamma(nd + 1.0);
                return std::exp(-std::exp(2.0 * log_ratio / nd)) / (t.c0 * t.c0);
            } else {
                const double md = static_cast<double>(t.m);
                const double nd = static_cast<double>(t.n);
                const double log_ratio = std::log(std::abs(t.cmn) / std::abs(t.c00));
                const double x_n = std::exp((log_ratio + std::lgamma(nd + 1.0)) / nd);
                const double x_m = std::exp((log_ratio + std::lgamma(md + 1.0)) / md);
                return std::exp(-x_n - x_m) / (t.c00 * t.c00);
            }
        },
        target);
}

} // namespace fockgen
