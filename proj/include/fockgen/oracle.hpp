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
 * Dense propagators exp(-i H' tau) built by numerically diagonalising the full
 * ancilla (x) Fock Hamiltonian. They know nothing about the 2x2 block
 * structure and are used only to validate the closed forms in jc_kernel.hpp.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "fockgen/errors.hpp"
#include "fockgen/jc_kernel.hpp"

namespace fockgen::oracle {

inline constexpr std::size_t kMaxQubitTruncation = 200;
inline constexpr std::size_t kMaxQutritDimension = 4000;

namespace detail {

inline Eigen::MatrixXcd unitary_from_hamiltonian(const Eigen::MatrixXd &hamiltonian, double tau) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the dense Hamiltonian failed");
    }
    const Eigen::MatrixXcd vectors = solver.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd phases(solver.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases[i] = std::polar(1.0, -solver.eigenvalues()[i] * tau);
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

} // namespace detail

/// Unitary on span{|g,k>, |e,k> : k < K}, basis index level*K + k (g = 0, e = 1).
class QubitPropagator {
  public:
    QubitPropagator(std::size_t K, Eigen::MatrixXcd unitary) : K_(K), u_(std::move(unitary)) {}

    std::size_t truncation() const noexcept { return K_; }
    const Eigen::MatrixXcd &matrix() const noexcept { return u_; }

    std::complex<double> element(Level out, std::size_t k_out, Level in, std::size_t k_in) const {
        return u_(index(out, k_out), index(in, k_in));
    }

    double unitarity_error() const {
        const auto n = u_.rows();
        return (u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    }

  private:
    Eigen::Index index(Level level, std::size_t k) const {
        return static_cast<Eigen::Index>((level == Level::excited ? K_ : 0) + k);
    }

    std::size_t K_;
    Eigen::MatrixXcd u_;
};

/// Dense H' of the qubit + single mode in the truncated basis.
inline Eigen::MatrixXd qubit_hamiltonian(const SystemParams &params, std::size_t K) {
    const auto n = static_cast<Eigen::Index>(2 * K);
    const auto ki = static_cast<Eigen::Index>(K);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < ki; ++k) {
        h(ki + k, ki + k) = params.delta;
        if (k + 1 < ki) {
            const double c = params.g * std::sqrt(static_cast<double>(k + 1));
            h(k + 1, ki + k) = c; // a^dag |g><e|
            h(ki + k, k + 1) = c;
        }
    }
    return h;
}

inline QubitPropagator jc_propagator_oracle(double tau, const SystemParams &params,
                                            std::size_t K) {
    if (K == 0 || K > kMaxQubitTruncation) {
        throw TruncationTooLarge("dense JC oracle supports 1 <= K <= " +
                                 std::to_string(kMaxQubitTruncation));
    }
    return QubitPropagator(K, detail::unitary_from_hamiltonian(qubit_hamiltonian(params, K), tau));
}

/// Qutrit levels of the V-type ancilla.
enum class QutritLevel { g = 0, e = 1, h = 2 };

/// Unitary on qutrit (x) mode a (x) mode b, index level*K_a*K_b + k*K_b + k'.
class QutritPropagator {
  public:
    QutritPropagator(std::size_t dim_a, std::size_t dim_b, Eigen::MatrixXcd unitary)
        : dim_a_(dim_a), dim_b_(dim_b), u_(std::move(unitary)) {}

    const Eigen::MatrixXcd &matrix() const noexcept { return u_; }

    std::complex<double> element(QutritLevel out, std::size_t k_out, std::size_t kp_out,
                                 QutritLevel in, std::size_t k_in, std::size_t kp_in) const {
        return u_(index(out, k_out, kp_out), index(in, k_in, kp_in));
    }

    /// <g,k,k'|U|g,k,k'>
    std::complex<double> ground_diagonal(std::size_t k, std::size_t kp) const {
        return element(QutritLevel::g, k, kp, QutritLevel::g, k, kp);
    }

    double unitarity_error() const {
        const auto n = u_.rows();
        return (u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    }

  private:
    Eigen::Index index(QutritLevel level, std::size_t k, std::size_t kp) const {
        return static_cast<Eigen::Index>(static_cast<std::size_t>(level) * dim_a_ * dim_b_ +
                                         k * dim_b_ + kp);
    }

    std::size_t dim_a_;
    std::size_t dim_b_;
    Eigen::MatrixXcd u_;
};

inline Eigen::MatrixXd qutrit_hamiltonian(const TwoModeParams &params, std::size_t dim_a,
                                          std::size_t dim_b) {
    const std::size_t block = dim_a * dim_b;
    const auto n = static_cast<Eigen::Index>(3 * block);
    auto idx = [&](std::size_t level, std::size_t k, std::size_t kp) {
        return static_cast<Eigen::Index>(level * block + k * dim_b + kp);
    };
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < dim_a; ++k) {
        for (std::size_t kp = 0; kp < dim_b; ++kp) {
            h(idx(1, k, kp), idx(1, k, kp)) = params.delta;
            h(idx(2, k, kp), idx(2, k, kp)) = params.delta;
            if (k + 1 < dim_a) { // a^dag |g><h|
                const double c = params.g_a * std::sqrt(static_cast<double>(k + 1));
                h(idx(0, k + 1, kp), idx(2, k, kp)) = c;
                h(idx(2, k, kp), idx(0, k + 1, kp)) = c;
            }
            if (kp + 1 < dim_b) { // b^dag |g><e|
                const double c = params.g_b * std::sqrt(static_cast<double>(kp + 1));
                h(idx(0, k, kp + 1), idx(1, k, kp)) = c;
                h(idx(1, k, kp), idx(0, k, kp + 1)) = c;
            }
        }
    }
    return h;
}

inline QutritPropagator qutrit_propagator_oracle(double tau, const TwoModeParams &params,
                                                 std::size_t dim_a, std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0 || 3 * dim_a * dim_b > kMaxQutritDimension) {
        throw TruncationTooLarge("dense qutrit oracle supports 1 <= 3*K_a*K_b <= " +
                                 std::to_string(kMaxQutritDimension));
    }
    return QutritPropagator(
        dim_a, dim_b,
        detail::unitary_from_hamiltonian(qutrit_hamiltonian(params, dim_a, dim_b), tau));
}

} // namespace fockgen::oracle
