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
 * Closed-form effective evolution of a resonator conditioned on the ancilla
 * being found in its initial level after one free-evolution period.
 *
 * Single mode (qubit ancilla, Jaynes-Cummings coupling, rotating frame)
 *     H' = delta |e><e| + g (a^dag |g><e| + a |e><g|)
 * Two modes (V-type qutrit, |g> <-> |h> via mode a, |g> <-> |e> via mode b,
 * equal detunings)
 *     H' = delta (|h><h| + |e><e|) + g_a (a^dag |g><h| + h.c.) + g_b (b^dag |g><e| + h.c.)
 *
 * Both effective operators are diagonal in the Fock basis. Units: frequencies
 * relative to the reference frequency, times in its inverse, hbar = 1.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"

namespace fockgen {

/// Ancilla level that is prepared and post-selected.
enum class Level { ground, excited };

constexpr std::string_view to_string(Level level) noexcept {
    return level == Level::ground ? "g" : "e";
}

struct SystemParams {
    double g = 0.05;
    double delta = 0.0;

    void validate() const {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw ValueError("coupling g must be positive and finite");
        }
        if (!std::isfinite(delta)) {
            throw ValueError("detuning must be finite");
        }
    }
    friend bool operator==(const SystemParams &, const SystemParams &) = default;
};

struct TwoModeParams {
    double g_a = 0.05;
    double g_b = 0.03;
    double delta = 0.0;

    void validate() const {
        if (!(g_a > 0.0) || !(g_b > 0.0) || !std::isfinite(g_a) || !std::isfinite(g_b)) {
            throw ValueError("couplings g_a, g_b must be positive and finite");
        }
        if (!std::isfinite(delta)) {
            throw ValueError("detuning must be finite");
        }
    }
    friend bool operator==(const TwoModeParams &, const TwoModeParams &) = default;
};

namespace detail {

/// sin(x)/x, with a Taylor series near zero.
inline double sinc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// Upper-left element of exp(-i tau [[d, G], [G, 0]]) (sign = -1) or the
/// lower-right one of the same block (sign = +1), Omega = sqrt(d^2/4 + G^2).
inline Complex two_level_return_amplitude(double omega, double tau, double delta, double sign) {
    const double sin_over_omega = tau * sinc(omega * tau);
    return std::polar(1.0, -0.5 * delta * tau) *
           Complex{std::cos(omega * tau), sign * 0.5 * delta * sin_over_omega};
}

} // namespace detail

/// k-photon Rabi frequency of the block containing |level, k>.
inline double rabi_frequency(Level level, std::size_t k, const SystemParams &params) {
    const double photons = static_cast<double>(k) + (level == Level::excited ? 1.0 : 0.0);
    return std::sqrt(0.25 * params.delta * params.delta + photons * params.g * params.g);
}

/**
 * lambda_k = <level, k| exp(-i H' tau) |level, k>.
 *
 * ground:  e^{-i delta tau/2} [cos(Omega tau) + i delta sin(Omega tau) / (2 Omega)]
 * excited: e^{-i delta tau/2} [cos(Omega tau) - i delta sin(Omega tau) / (2 Omega)]
 *
 * The moduli agree; the sign of the sine term follows from which level of the
 * 2x2 block carries the detuning.
 */
inline Complex reduction_coefficient(Level level, std::size_t k, double tau,
                                     const SystemParams &params) {
    const double omega = rabi_frequency(level, k, params);
    return detail::two_level_return_amplitude(omega, tau, params.delta,
                                              level == Level::ground ? 1.0 : -1.0);
}

/// Diagonal Kraus operator V_i(tau) = sum_k lambda_k |k><k|.
class DiagonalKraus {
  public:
    DiagonalKraus(std::vector<Complex> coeffs, Level level, double tau)
        : coeffs_(std::move(coeffs)), level_(level), tau_(tau) {}

    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    const Complex &operator[](std::size_t k) const { return coeffs_[k]; }
    Level level() const noexcept { return level_; }
    double tau() const noexcept { return tau_; }

    /// |lambda_k|^{2N}, the population-reduction factor after N cycles.
    std::vector<double> reduction_profile(int cycles) const {
        std::vector<double> out(coeffs_.size());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            out[k] = std::pow(std::norm(coeffs_[k]), cycles);
        }
        return out;
    }

  private:
    std::vector<Complex> coeffs_;
    Level level_;
    double tau_;
};

inline DiagonalKraus kraus_diagonal(Level level, double tau, const SystemParams &params,
                                    std::size_t K) {
    if (K == 0) {
        throw DimensionMismatch("kraus_diagonal needs K >= 1");
    }
    std::vector<Complex> coeffs(K);
    for (std::size_t k = 0; k < K; ++k) {
        coeffs[k] = reduction_coefficient(level, k, tau, params);
    }
    return DiagonalKraus(std::move(coeffs), level, tau);
}

/// Omega_{kk'} = sqrt(delta^2/4 + g_a^2 k + g_b^2 k').
inline double two_mode_rabi(std::size_t k, std::size_t kp, const TwoModeParams &params) {
    return std::sqrt(0.25 * params.delta * params.delta +
                     params.g_a * params.g_a * static_cast<double>(k) +
                     params.g_b * params.g_b * static_cast<double>(kp));
}

inline Complex two_mode_coefficient(std::size_t k, std::size_t kp, double tau,
                                    const TwoModeParams &params) {
    return detail::two_level_return_amplitude(two_mode_rabi(k, kp, params), tau, params.delta,
                                              1.0);
}

/// Pi_g(tau) = sum lambda_{kk'} |kk'><kk'|, coefficients row-major (k major).
class TwoModeKraus {
  public:
    TwoModeKraus(std::size_t dim_a, std::size_t dim_b, std::vector<Complex> coeffs, double tau)
        : dim_a_(dim_a), dim_b_(dim_b), coeffs_(std::move(coeffs)), tau_(tau) {}

    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    const Complex &at(std::size_t k, std::size_t kp) const { return coeffs_[k * dim_b_ + kp]; }
    double tau() const noexcept { return tau_; }

    std::vector<double> reduction_profile(int cycles) const {
        std::vector<double> out(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            out[i] = std::pow(std::norm(coeffs_[i]), cycles);
        }
        return out;
    }

  private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    std::vector<Complex> coeffs_;
    double tau_;
};

inline TwoModeKraus two_mode_kraus(double tau, const TwoModeParams &params, std::size_t dim_a,
                                   std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0) {
        throw DimensionMismatch("two_mode_kraus needs K_a, K_b >= 1");
    }
    std::vector<Complex> coeffs(dim_a * dim_b);
    for (std::size_t k = 0; k < dim_a; ++k) {
        for (std::size_t kp = 0; kp < dim_b; ++kp) {
            coeffs[k * dim_b + kp] = two_mode_coefficient(k, kp, tau, params);
        }
    }
    return TwoModeKraus(dim_a, dim_b, std::move(coeffs), tau);
}

} // namespace fockgen
