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

#include "fockgen/metrics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "fockgen/protocol.hpp"
#include "test_util.hpp"

using namespace fockgen;

namespace {

double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

} // namespace

TEST(coherent_amplitude, matches_state_builder) {
    const Complex alpha{1.1, -0.7};
    const auto v = coherent_state(alpha, 40);
    for (std::size_t k = 0; k < 40; ++k) {
        EXPECT_NEAR(std::abs(coherent_amplitude(alpha, k) - v[k]), 0.0, 1e-15);
    }
    EXPECT_EQ(coherent_amplitude(0.0, 0), Complex(1.0));
    EXPECT_EQ(coherent_amplitude(0.0, 3), Complex(0.0));
}

TEST(poisson_weight, values) {
    EXPECT_NEAR(poisson_weight(5.0, 5), std::exp(-5.0) * std::pow(5.0, 5) / 120.0, 1e-15);
    EXPECT_NEAR(poisson_weight(5.0, 5), 0.175467, 1e-6);
    EXPECT_NEAR(poisson_weight(5.0, 23), std::exp(-5.0) * std::pow(5.0, 23) / factorial(23), 1e-20);
    EXPECT_DOUBLE_EQ(poisson_weight(0.0, 0), 1.0);
}

TEST(closed_form, fock_matches_simulation) {
    test_support::Gen gen(31);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = gen.index(1, 8);
        const SystemParams p{gen.uniform(0.02, 0.08), trial % 2 ? gen.uniform(0.0, 0.03) : 0.0};
        const double tau = tau_excited(n, 1, p);
        const double alpha = std::sqrt(static_cast<double>(n));
        const std::size_t K = default_truncation(alpha * alpha, n + 2);
        const Schedule schedule(25, CycleSpec{tau, Level::excited, p});
        const auto record =
            run_postselected(coherent_state(alpha, K), schedule, FockVector::number_state(n, K));
        for (int N = 0; N <= 25; ++N) {
            EXPECT_NEAR(fock_fidelity_closed_form(n, N, tau, p, alpha, K),
                        record.at_cycle(N).fidelity(), 1e-10);
            EXPECT_NEAR(success_closed_form(Level::excited, N, tau, p, alpha, K),
                        record.at_cycle(N).success, 1e-10);
        }
    }
}

TEST(closed_form, superposed_matches_simulation) {
    for (double delta : {0.0, 0.01}) {
        for (std::size_t n : {2u, 5u, 7u}) {
            const SuperposedTarget t{n, 0.6, 0.8, 1};
            const SystemParams p{0.05, delta};
            const double tau = tau_ground(n, 1, p);
            const double alpha = initial_amplitude(t).alpha;
            const std::size_t K = default_truncation(t).dim_a;
            const Schedule schedule(20, CycleSpec{tau, Level::ground, p});
            const auto record = run_postselected(coherent_state(alpha, K), schedule,
                                                 single_mode_branches(t, K));
            for (int N = 0; N <= 20; ++N) {
                const auto F = superposed_fidelity_closed_form(t, N, tau, p, alpha, K);
                EXPECT_NEAR(F.plus, record.at_cycle(N).fidelities[0], 1e-10);
                EXPECT_NEAR(F.minus, record.at_cycle(N).fidelities[1], 1e-10);
                EXPECT_NEAR(F.success, record.at_cycle(N).success, 1e-10);
            }
        }
    }
}

TEST(closed_form, superposed_resonant_cosine_form) {
    // delta = 0: lambda_0 = 1 and lambda_n = cos(Omega_n tau), real.
    const SuperposedTarget t{4};
    const SystemParams p{};
    const double tau = 0.8 * tau_ground(4, 1, p);
    const double alpha = initial_amplitude(t).alpha;
    const std::size_t K = 40;
    const double cn = std::cos(p.g * 2.0 * tau);
    for (int N = 0; N < 15; ++N) {
        double P = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            P += poisson_weight(alpha * alpha, k) *
                 std::pow(std::cos(p.g * std::sqrt(static_cast<double>(k)) * tau), 2 * N);
        }
        const double p0 = poisson_weight(alpha * alpha, 0);
        const double p4 = poisson_weight(alpha * alpha, 4);
        const double cross = std::sqrt(p0 * p4) * std::pow(cn, N);
        const double plus = 0.5 * (p0 + p4 * std::pow(cn, 2 * N) + 2 * cross) / P;
        const auto F = superposed_fidelity_closed_form(t, N, tau, p, alpha, K);
        EXPECT_NEAR(F.plus, plus, 1e-12) << N;
    }
}

TEST(closed_form, bell_matches_simulation) {
    const BellTarget t{2, 2};
    const TwoModeParams p{0.05, 0.03, 0.005};
    const double tau = tau_bell(2, 2, 1, p);
    const auto amp = initial_amplitude(t);
    const Truncation dims = default_truncation(TargetSpec{t});
    const TwoModeSchedule schedule(15, TwoModeCycleSpec{tau, p});
    const auto record = run_postselected(initial_two_mode_state(t, dims), schedule,
                                         two_mode_branches(t, dims));
    for (int N = 0; N <= 15; ++N) {
        const auto F = bell_fidelity_closed_form(t, N, tau, p, amp.alpha, *amp.beta, dims);
        EXPECT_NEAR(F.plus, record.at_cycle(N).fidelities[0], 1e-10);
        EXPECT_NEAR(F.minus, record.at_cycle(N).fidelities[1], 1e-10);
        EXPECT_NEAR(F.success, record.at_cycle(N).success, 1e-10);
    }
}

TEST(closed_form, errors) {
    EXPECT_THROW(fock_fidelity_closed_form(10, 1, 1.0, SystemParams{}, 1.0, 5), DimensionMismatch);
    EXPECT_THROW(superposed_fidelity_closed_form(SuperposedTarget{6}, 1, 1.0, SystemParams{}, 1.0, 4),
                 DimensionMismatch);
    EXPECT_THROW(bell_fidelity_closed_form(BellTarget{3, 3}, 1, 1.0, TwoModeParams{}, 1.0, 1.0,
                                           Truncation{3, 5}),
                 DimensionMismatch);
}

TEST(asymptotic_success, values) {
    EXPECT_NEAR(asymptotic_success(FockTarget{8}), std::exp(-8.0) * std::pow(8.0, 8) / factorial(8),
                1e-14);
    EXPECT_NEAR(asymptotic_success(FockTarget{8}), 0.1396, 1e-4);
    EXPECT_NEAR(asymptotic_success(SuperposedTarget{8}), 2 * std::exp(-std::pow(factorial(8), 0.125)),
                1e-12);
    EXPECT_NEAR(asymptotic_success(SuperposedTarget{8}), 0.0464, 2e-4);
    EXPECT_NEAR(asymptotic_success(BellTarget{4, 4}), 2 * std::exp(-2 * std::pow(24.0, 0.25)), 1e-12);
    EXPECT_NEAR(asymptotic_success(BellTarget{4, 4}), 0.0239, 1e-4);
}

TEST(asymptotic_success, approached_by_long_runs) {
    // Fock |8>, uniform cycles: weights off the stabilized set decay away.
    const SystemParams p{};
    const double tau = tau_excited(8, 1, p);
    const double P = success_closed_form(Level::excited, 400, tau, p, std::sqrt(8.0));
    EXPECT_NEAR(P, asymptotic_success(FockTarget{8}), 1e-3);
    EXPECT_GE(P, asymptotic_success(FockTarget{8}));
}
