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
 * Truncated Fock-space pure states of one or two bosonic modes, coherent-state
 * construction, overlaps and the diagonal/off-diagonal density-matrix view.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fockgen/errors.hpp"

namespace fockgen {

using Complex = std::complex<double>;

inline constexpr double kDefaultTailThreshold = 1e-12;

namespace detail {

inline double norm_squared(std::span<const Complex> amps) {
    double acc = 0.0;
    for (const auto &c : amps) {
        acc += std::norm(c);
    }
    return acc;
}

inline std::vector<Complex> normalized_copy(std::span<const Complex> amps) {
    const double n2 = norm_squared(amps);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw NumericalError("cannot normalize a state with zero or non-finite norm");
    }
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<Complex> out(amps.begin(), amps.end());
    for (auto &c : out) {
        c *= inv;
    }
    return out;
}

} // namespace detail

/// Pure state of a single mode, amplitudes c_0..c_{K-1}.
class FockVector {
  public:
    FockVector() = default;
    explicit FockVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
        if (amps_.empty()) {
            throw DimensionMismatch("FockVector needs at least one level");
        }
    }

    /// Number state |n> in a space of dimension K.
    static FockVector number_state(std::size_t n, std::size_t K) {
        if (n >= K) {
            throw DimensionMismatch("Fock index " + std::to_string(n) +
                                    " outside truncation " + std::to_string(K));
        }
        std::vector<Complex> amps(K, Complex{0.0, 0.0});
        amps[n] = 1.0;
        return FockVector(std::move(amps));
    }

    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Complex> amps() const noexcept { return amps_; }
    const Complex &operator[](std::size_t k) const { return amps_[k]; }

    double norm_squared() const { return detail::norm_squared(amps_); }
    FockVector normalized() const { return FockVector(detail::normalized_copy(amps_)); }

    bool same_shape(const FockVector &other) const noexcept {
        return size() == other.size();
    }

  private:
    std::vector<Complex> amps_;
};

/// Pure state of two modes, amplitudes c_{kk'} stored row-major (k major).
class TwoModeState {
  public:
    TwoModeState() = default;
    TwoModeState(std::size_t dim_a, std::size_t dim_b, std::vector<Complex> amps)
        : dim_a_(dim_a), dim_b_(dim_b), amps_(std::move(amps)) {
        if (dim_a_ == 0 || dim_b_ == 0 || amps_.size() != dim_a_ * dim_b_) {
            throw DimensionMismatch("TwoModeState amplitude count does not match " +
                                    std::to_string(dim_a_) + "x" + std::to_string(dim_b_));
        }
    }

    static TwoModeState number_state(std::size_t k, std::size_t kp, std::size_t dim_a,
                                     std::size_t dim_b) {
        if (k >= dim_a || kp >= dim_b) {
            throw DimensionMismatch("two-mode Fock index outside truncation");
        }
        std::vector<Complex> amps(dim_a * dim_b, Complex{0.0, 0.0});
        amps[k * dim_b + kp] = 1.0;
        return TwoModeState(dim_a, dim_b, std::move(amps));
    }

    std::size_t dim_a() const noexcept { return dim_a_; }
    std::size_t dim_b() const noexcept { return dim_b_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const Complex> amps() const noexcept { return amps_; }
    const Complex &at(std::size_t k, std::size_t kp) const { return amps_[k * dim_b_ + kp]; }

    double norm_squared() const { return detail::norm_squared(amps_); }
    TwoModeState normalized() const {
        return TwoModeState(dim_a_, dim_b_, detail::normalized_copy(amps_));
    }

    bool same_shape(const TwoModeState &other) const noexcept {
        return dim_a_ == other.dim_a_ && dim_b_ == other.dim_b_;
    }

    /// Population of mode a (summed over mode b) at level k.
    double marginal_a(std::size_t k) const {
        double acc = 0.0;
        for (std::size_t kp = 0; kp < dim_b_; ++kp) {
            acc += std::norm(at(k, kp));
        }
        return acc;
    }
    double marginal_b(std::size_t kp) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim_a_; ++k) {
            acc += std::norm(at(k, kp));
        }
        return acc;
    }

  private:
    std::size_t dim_a_ = 0;
    std::size_t dim_b_ = 0;
    std::vector<Complex> amps_;
};

/// Anything with flat amplitudes and a shape check.
template <class S>
concept PureState = requires(const S &s) {
    { s.amps() } -> std::convertible_to<std::span<const Complex>>;
    { s.same_shape(s) } -> std::convertible_to<bool>;
    { s.normalized() } -> std::same_as<S>;
};

/// Truncation K = ceil(|a|^2 + 8|a| + 8), raised to `min_dim` if needed.
inline std::size_t default_truncation(double mean_photons, std::size_t min_dim = 1) {
    const double m = std::max(mean_photons, 0.0);
    const auto k = static_cast<std::size_t>(std::ceil(m + 8.0 * std::sqrt(m) + 8.0));
    return std::max(k, min_dim);
}

/**
 * Coherent state |alpha> truncated to K levels:
 * c_k = exp(-|alpha|^2/2) alpha^k / sqrt(k!).
 *
 * Amplitudes come from the running product c_k = c_{k-1} alpha / sqrt(k); above
 * k = 140 they are evaluated in log space. Throws TailMassExceeded if the last
 * kept level still carries |c_{K-1}|^2 >= tail_threshold.
 */
inline FockVector coherent_state(Complex alpha, std::size_t K,
                                 double tail_threshold = kDefaultTailThreshold) {
    if (K == 0) {
        throw DimensionMismatch("coherent_state needs K >= 1");
    }
    constexpr std::size_t kLogDomainFrom = 140;
    const double r2 = std::norm(alpha);
    const double r = std::sqrt(r2);
    const double phase = std::arg(alpha);
    std::vector<Complex> amps(K);
    amps[0] = std::exp(-0.5 * r2);
    for (std::size_t k = 1; k < K; ++k) {
        if (k <= kLogDomainFrom) {
            amps[k] = amps[k - 1] * alpha / std::sqrt(static_cast<double>(k));
        } else if (r == 0.0) {
            amps[k] = 0.0;
        } else {
            const double kd = static_cast<double>(k);
            const double log_mag = -0.5 * r2 + kd * std::log(r) - 0.5 * std::lgamma(kd + 1.0);
            amps[k] = std::polar(std::exp(log_mag), kd * phase);
        }
    }
    const double tail = std::norm(amps[K - 1]);
    if (tail >= tail_threshold) {
        throw TailMassExceeded("coherent state tail |c_" + std::to_string(K - 1) +
                               "|^2 = " + std::to_string(tail) + " >= threshold; raise K");
    }
    return FockVector(std::move(amps)).normalized();
}

/// |a> (x) |b>, c_{kk'} = a_k b_k'.
inline TwoModeState product_state(const FockVector &a, const FockVector &b) {
    std::vector<Complex> amps(a.size() * b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t kp = 0; kp < b.size(); ++kp) {
            amps[k * b.size() + kp] = a[k] * b[kp];
        }
    }
    return TwoModeState(a.size(), b.size(), std::move(amps)).normalized();
}

/// <a|b> over flat amplitudes.
template <PureState S>
Complex inner_product(const S &a, const S &b) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch("inner product of states with different truncation");
    }
    const auto x = a.amps();
    const auto y = b.amps();
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

/// |<target|state>|^2.
template <PureState S>
double fidelity(const S &state, const S &target) {
    return std::norm(inner_product(target, state));
}

/**
 * Density matrix of a pure state split into populations p_k and coherences
 * C_{kk'} = c_k conj(c_k'). Two-mode states use the flat index k*K_b + k'.
 */
class DensityMatrixView {
  public:
    explicit DensityMatrixView(std::span<const Complex> amps)
        : dim_(amps.size()), amps_(amps.begin(), amps.end()), diag_(amps.size()) {
        for (std::size_t k = 0; k < dim_; ++k) {
            diag_[k] = std::norm(amps_[k]);
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> diag() const noexcept { return diag_; }
    double population(std::size_t k) const { return diag_[k]; }

    /// <k|rho|k'>; for k == k' this is the population.
    Complex element(std::size_t k, std::size_t kp) const {
        return amps_[k] * std::conj(amps_[kp]);
    }
    Complex coherence(std::size_t k, std::size_t kp) const { return element(k, kp); }

    double trace() const { return std::accumulate(diag_.begin(), diag_.end(), 0.0); }

    /// Tr rho^2 = sum_k p_k^2 + sum_{k != k'} |C_{kk'}|^2.
    double purity() const {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            for (std::size_t kp = 0; kp < dim_; ++kp) {
                acc += std::norm(element(k, kp));
            }
        }
        return acc;
    }

  private:
    std::size_t dim_;
    std::vector<Complex> amps_;
    std::vector<double> diag_;
};

template <PureState S>
DensityMatrixView density_view(const S &state) {
    return DensityMatrixView(state.amps());
}

} // namespace fockgen
