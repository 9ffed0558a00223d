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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fockgen/fockgen.hpp"
#include "fockgen/oracle.hpp"
#include "fockgen/runner.hpp"

using namespace fockgen;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

class Detail {
  public:
    template <class T>
    Detail &operator()(const std::string &key, T value) {
        if (!text_.empty()) {
            text_ += " ";
        }
        std::ostringstream ss;
        ss.precision(6);
        ss << key << "=" << value;
        text_ += ss.str();
        return *this;
    }
    std::string str() const { return text_; }

  private:
    std::string text_;
};

EvolutionRecord<FockVector> single_mode(const TargetSpec &target, const StrategySpec &strategy,
                                        RunOptions opts = {}) {
    const std::size_t K = default_truncation(target).dim_a;
    return run_postselected(initial_single_mode_state(target, K),
                            build_schedule(target, strategy, SystemParams{}),
                            single_mode_branches(target, K), opts);
}

EvolutionRecord<TwoModeState> bell(const TargetSpec &target, const StrategySpec &strategy) {
    const Truncation dims = default_truncation(target);
    return run_postselected(initial_two_mode_state(target, dims),
                            build_schedule(target, strategy, TwoModeParams{0.05, 0.03, 0.0}),
                            two_mode_branches(target, dims));
}

StrategySpec s3q5(int cycles) { return {HybridStrategy{3, 5}, cycles}; }

StrategySpec s3q5L(int L, int cycles) {
    return {TwoModeHybridStrategy{3, 5, L, TwoModeParams{0.05, 0.03, 0.0},
                                  TwoModeParams{0.03, 0.05, 0.0}},
            cycles};
}

/// First N whose branch fidelity reaches `threshold`, or nullopt.
template <PureState S>
std::optional<int> first_reaching(const EvolutionRecord<S> &record, double threshold) {
    for (const auto &e : record.entries) {
        if (branch_fidelity(e) >= threshold) {
            return e.cycle;
        }
    }
    return std::nullopt;
}

int or_minus_one(std::optional<int> n) { return n.value_or(-1); }

// 1 ------------------------------------------------------------------------
Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> ug(0.01, 0.1), ud(0.0, 0.05), ut(1.0, 100.0);
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        const SystemParams p{ug(rng), ud(rng)};
        const double tau = ut(rng);
        const auto u = oracle::jc_propagator_oracle(tau, p, 40);
        for (std::size_t k = 0; k < 39; ++k) {
            for (Level level : {Level::ground, Level::excited}) {
                worst = std::max(worst, std::abs(u.element(level, k, level, k) -
                                                 reduction_coefficient(level, k, tau, p)));
            }
        }
    }
    double worst_two = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const TwoModeParams p{ug(rng), ug(rng), ud(rng)};
        const double tau = ut(rng);
        const auto u = oracle::qutrit_propagator_oracle(tau, p, 12, 12);
        for (std::size_t k = 0; k < 12; ++k) {
            for (std::size_t kp = 0; kp < 12; ++kp) {
                worst_two = std::max(worst_two, std::abs(u.ground_diagonal(k, kp) -
                                                         two_mode_coefficient(k, kp, tau, p)));
            }
        }
    }
    const double wall = seconds_since(t0);
    return {worst < 1e-9 && worst_two < 1e-9 && wall < 30.0,
            Detail()("max_err_single", worst)("max_err_two_mode", worst_two)("seconds", wall).str()};
}

// 2 ------------------------------------------------------------------------
Outcome fock5() {
    const double f_hybrid = single_mode(FockTarget{5}, s3q5(15)).final().fidelity();
    const double f_uniform = single_mode(FockTarget{5}, {UniformStrategy{}, 20}).final().fidelity();
    return {f_hybrid >= 0.996 && std::abs(f_uniform - 0.686) <= 0.01,
            Detail()("F15_S3q5", f_hybrid)("F20_uniform", f_uniform).str()};
}

// 3 ------------------------------------------------------------------------
Outcome fock10() {
    const double f = single_mode(FockTarget{10}, s3q5(30)).final().fidelity();
    return {f >= 0.984, Detail()("F30_S3q5", f).str()};
}

// 4 ------------------------------------------------------------------------
Outcome fock_rounds() {
    const int n2 = or_minus_one(first_reaching(single_mode(FockTarget{2}, s3q5(30)), 0.99));
    const int n8 = or_minus_one(first_reaching(single_mode(FockTarget{8}, s3q5(40)), 0.99));
    return {n2 == 6 && n8 >= 21 && n8 <= 25, Detail()("N_fock2", n2)("N_fock8", n8).str()};
}

// 5 ------------------------------------------------------------------------
Outcome superposed5() {
    const double hybrid = single_mode(SuperposedTarget{5}, s3q5(10)).final().fidelities[0];
    const double uniform =
        single_mode(SuperposedTarget{5}, {UniformStrategy{}, 10}).final().fidelities[0];
    return {hybrid >= 0.99 && std::abs(uniform - 0.71) <= 0.02,
            Detail()("Fplus10_S3q5", hybrid)("Fplus10_uniform", uniform).str()};
}

// 6 ------------------------------------------------------------------------
Outcome superposed_rounds() {
    const std::vector<std::pair<std::size_t, int>> expected{{2, 6}, {4, 8}, {6, 14}, {8, 20}};
    bool pass = true;
    Detail d;
    for (const auto &[n, want] : expected) {
        const int got =
            or_minus_one(first_reaching(single_mode(SuperposedTarget{n}, s3q5(30)), 0.99));
        pass = pass && got >= 0 && std::abs(got - want) <= 1;
        d("N_n" + std::to_string(n), got);
    }
    return {pass, d.str()};
}

// 7 ------------------------------------------------------------------------
Outcome asymptotic() {
    const double p_fock = single_mode(FockTarget{8}, s3q5(40)).final().success;
    const double ref_fock = std::exp(-8.0) * std::pow(8.0, 8) / 40320.0;
    const double p_sup = single_mode(SuperposedTarget{8}, s3q5(40)).final().success;
    const double ref_sup = asymptotic_success(SuperposedTarget{8});
    return {std::abs(p_fock - ref_fock) <= 1e-3 && std::abs(p_sup - ref_sup) <= 1e-3 &&
                std::abs(ref_sup - 0.0464) <= 1e-3,
            Detail()("P40_fock8", p_fock)("formula", ref_fock)("P40_superposed8", p_sup)(
                "formula", ref_sup)
                .str()};
}

// 8 ------------------------------------------------------------------------
Outcome bell44() {
    const auto hybrid = bell(BellTarget{4, 4}, s3q5L(15, 40));
    const double f_hybrid = branch_fidelity(hybrid.at_cycle(30));
    const double p_stable = hybrid.at_cycle(40).success;
    const double f_uniform = branch_fidelity(bell(BellTarget{4, 4}, {UniformStrategy{}, 30}).final());
    return {f_hybrid >= 0.99 && std::abs(f_uniform - 0.25) <= 0.05 && p_stable >= 0.018 &&
                p_stable <= 0.035,
            Detail()("F30_S3q5L15", f_hybrid)("F30_uniform", f_uniform)("P40", p_stable).str()};
}

// 9 ------------------------------------------------------------------------
Outcome bell_rounds() {
    const auto r1 = bell(BellTarget{1, 1}, s3q5L(8, 40));
    const auto r3 = bell(BellTarget{3, 3}, s3q5L(8, 40));
    const int n1 = or_minus_one(first_reaching(r1, 0.99));
    const int n3 = or_minus_one(first_reaching(r3, 0.99));
    const double p1 = r1.final().success;
    const double p3 = r3.final().success;
    return {n1 >= 0 && n1 <= 9 && n3 >= 0 && n3 <= 14 && std::abs(p1 - 0.28) <= 0.01 &&
                std::abs(p3 - 0.06) <= 0.01,
            Detail()("N_n1", n1)("N_n3", n3)("P40_n1", p1)("P40_n3", p3).str()};
}

// 10 -----------------------------------------------------------------------
Outcome residual() {
    const auto psi = initial_single_mode_state(FockTarget{5}, default_truncation(TargetSpec{FockTarget{5}}).dim_a);
    const double p23 = std::norm(psi[23]);
    return {p23 >= 1e-6 && p23 <= 1e-4, Detail()("p23", p23)("amplitude", std::sqrt(p23)).str()};
}

// 11 -----------------------------------------------------------------------
Outcome properties() {
    double purity_err = 0.0;
    double closed_form_err = 0.0;
    double conservation_err = 0.0;
    bool monotone = true;
    bool parity = true;

    for (std::size_t n : {2u, 5u, 8u, 10u}) {
        for (const StrategySpec &strategy : {StrategySpec{UniformStrategy{}, 30}, s3q5(30)}) {
            const TargetSpec t = FockTarget{n};
            const auto record = single_mode(t, strategy, {.keep_snapshots = true});
            const std::size_t K = record.final().snapshot->size();
            const auto psi0 = *record.at_cycle(0).snapshot;
            for (int N = 1; N <= record.cycles(); ++N) {
                const auto &e = record.at_cycle(N);
                purity_err = std::max(purity_err, std::abs(density_view(*e.snapshot).purity() - 1.0));
                monotone = monotone && e.success <= record.at_cycle(N - 1).success;
                for (std::size_t k : stabilized_indices(n, 1, K, Level::excited)) {
                    conservation_err = std::max(
                        conservation_err,
                        std::abs(std::norm((*e.snapshot)[k]) * e.success / std::norm(psi0[k]) - 1.0));
                }
            }
            if (std::holds_alternative<UniformStrategy>(strategy.kind)) {
                const double tau = tau_excited(n, 1, SystemParams{});
                for (int N = 0; N <= record.cycles(); ++N) {
                    closed_form_err = std::max(
                        closed_form_err,
                        std::abs(fock_fidelity_closed_form(n, N, tau, SystemParams{},
                                                           std::sqrt(static_cast<double>(n)), K) -
                                 record.at_cycle(N).fidelity()));
                }
            }
        }
    }

    for (std::size_t n : {2u, 5u}) {
        const TargetSpec t = SuperposedTarget{n};
        for (int l : {1, 3}) {
            const auto record = single_mode(t, {HybridStrategy{l, 0}, 12}, {.keep_snapshots = true});
            for (int N = 0; N <= 12; ++N) {
                const auto &e = record.at_cycle(N);
                const double re = density_view(*e.snapshot).coherence(n, 0).real();
                parity = parity && ((re > 0.0) == (N % 2 == 0));
                purity_err = std::max(purity_err, std::abs(density_view(*e.snapshot).purity() - 1.0));
            }
        }
        const auto uniform = single_mode(t, {UniformStrategy{}, 20});
        const double tau = tau_ground(n, 1, SystemParams{});
        const double alpha = initial_amplitude(t).alpha;
        const std::size_t K = default_truncation(t).dim_a;
        for (int N = 0; N <= 20; ++N) {
            const auto F = superposed_fidelity_closed_form(std::get<SuperposedTarget>(t), N, tau,
                                                           SystemParams{}, alpha, K);
            closed_form_err = std::max(
                {closed_form_err, std::abs(F.plus - uniform.at_cycle(N).fidelities[0]),
                 std::abs(F.minus - uniform.at_cycle(N).fidelities[1]),
                 std::abs(F.success - uniform.at_cycle(N).success)});
        }
    }

    return {purity_err <= 1e-12 && monotone && parity && closed_form_err <= 1e-10 &&
                conservation_err <= 1e-10,
            Detail()("purity_err", purity_err)("monotone", monotone)("parity", parity)(
                "closed_form_err", closed_form_err)("conservation_err", conservation_err)
                .str()};
}

// 12 -----------------------------------------------------------------------
Outcome monte_carlo() {
    RunConfig cfg;
    cfg.target = FockTarget{5};
    cfg.strategy = s3q5(15);
    cfg.mode = RunMode::trajectories;
    cfg.trajectories = 10000;
    cfg.seed = 2026;
    const auto a = run(cfg, 0);
    const auto b = run(cfg, 1);
    const double P = a.summary["postselected_success_prob"].get<double>();
    const double freq = a.summary["acceptance_frequency"].get<double>();
    const double attempts = a.summary["attempts"].get<double>();
    const double sigma = std::sqrt(P * (1.0 - P) / attempts);
    const bool identical = a.csv == b.csv && a.summary.dump() == b.summary.dump();
    return {std::abs(freq - P) <= 3.0 * sigma && identical,
            Detail()("frequency", freq)("P15", P)("sigmas", std::abs(freq - P) / sigma)(
                "byte_identical", identical)
                .str()};
}

// 13 -----------------------------------------------------------------------
Outcome presets() {
    const auto dir = std::filesystem::temp_directory_path() / "fockgen_acceptance_presets";
    std::filesystem::remove_all(dir);
    const auto t0 = Clock::now();
    std::size_t files = 0;
    for (const auto &name : list_presets()) {
        files += run_preset(name, dir, 1).size();
    }
    const double wall = seconds_since(t0);
    std::filesystem::remove_all(dir);
    return {wall < 60.0, Detail()("presets", list_presets().size())("files", files)("seconds", wall).str()};
}

} // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{
        oracle_equivalence, fock5,     fock10,   fock_rounds, superposed5,
        superposed_rounds,  asymptotic, bell44,   bell_rounds, residual,
        properties,         monte_carlo, presets};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out{false, ""};
        try {
            out = criteria[i]();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += out.pass ? 0 : 1;
        std::printf("criterion %2zu: %s  %s\n", i + 1, out.pass ? "PASS" : "FAIL", out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
