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
 * Target states, cycle periods, stabilized Fock indices, the uniform / hybrid
 * strategy family and an exhaustive optimizer over it.
 *
 * Strategies (N = total cycles, tau = base period of the target):
 *   uniform            every cycle at tau
 *   hybrid (l, q)      cycles 1..q at tau, the rest at l*tau
 *   two-mode (l,q,L)   couplings `before` for cycles 1..L and `after` from L+1;
 *                      short period for 1..q and L+1..L+q, l times longer
 *                      otherwise. tau is recomputed from the active couplings.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"
#include "fockgen/jc_kernel.hpp"
#include "fockgen/protocol.hpp"

namespace fockgen {

// ---------------------------------------------------------------------------
// Targets

/// |n>
struct FockTarget {
    std::size_t n = 1;
    friend bool operator==(const FockTarget &, const FockTarget &) = default;
};

/// c0 |0> + sign * cn |n>
struct SuperposedTarget {
    std::size_t n = 1;
    double c0 = std::numbers::sqrt2 / 2;
    double cn = std::numbers::sqrt2 / 2;
    int sign = 1;
    friend bool operator==(const SuperposedTarget &, const SuperposedTarget &) = default;
};

/// c00 |00> + sign * cmn |mn>
struct BellTarget {
    std::size_t m = 1;
    std::size_t n = 1;
    double c00 = std::numbers::sqrt2 / 2;
    double cmn = std::numbers::sqrt2 / 2;
    int sign = 1;
    friend bool operator==(const BellTarget &, const BellTarget &) = default;
};

using TargetSpec = std::variant<FockTarget, SuperposedTarget, BellTarget>;

inline bool is_two_mode(const TargetSpec &target) {
    return std::holds_alternative<BellTarget>(target);
}

inline void validate(const TargetSpec &target) {
    auto check_pair = [](double a, double b, const char *what) {
        if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a * a + b * b - 1.0) > 1e-12) {
            throw ValueError(std::string(what) + " coefficients must satisfy |c|^2 + |c'|^2 = 1");
        }
        if (a == 0.0 || b == 0.0) {
            throw ValueError(std::string(what) + " coefficients must both be non-zero");
        }
    };
    std::visit(
        [&](const auto &t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, FockTarget>) {
                // n = 0 is the vacuum; allowed but uninteresting.
            } else if constexpr (std::is_same_v<T, SuperposedTarget>) {
                if (t.n < 1) {
                    throw ValueError("superposed target needs n >= 1");
                }
                if (t.sign != 1 && t.sign != -1) {
                    throw ValueError("sign must be +1 or -1");
                }
                check_pair(t.c0, t.cn, "superposed");
            } else {
                if (t.m < 1 || t.n < 1) {
                    throw ValueError("Bell target needs m, n >= 1");
                }
                if (t.sign != 1 && t.sign != -1) {
                    throw ValueError("sign must be +1 or -1");
                }
                check_pair(t.c00, t.cmn, "Bell");
            }
        },
        target);
}

// ---------------------------------------------------------------------------
// Periods

inline double tau_excited(std::size_t n, int l, const SystemParams &params) {
    if (l < 1) {
        throw ValueError("period multiple l must be >= 1");
    }
    return l * std::numbers::pi / rabi_frequency(Level::excited, n, params);
}

inline double tau_ground(std::size_t n, int l, const SystemParams &params) {
    if (n == 0) {
        throw DegenerateTarget("ground-state period undefined for n = 0");
    }
    if (l < 1) {
        throw ValueError("period multiple l must be >= 1");
    }
    return l * std::numbers::pi / rabi_frequency(Level::ground, n, params);
}

inline double tau_bell(std::size_t m, std::size_t n, int l, const TwoModeParams &params) {
    if (m == 0 && n == 0) {
        throw DegenerateTarget("two-mode period undefined for (m, n) = (0, 0)");
    }
    if (l < 1) {
        throw ValueError("period multiple l must be >= 1");
    }
    return l * std::numbers::pi / two_mode_rabi(m, n, params);
}

/**
 * Fock indices k < K whose coefficient has modulus one at tau = l * tau_n
 * (delta = 0), by exact integer arithmetic:
 *   excited: k + 1 = j^2 (n + 1) / l^2
 *   ground:  k     = j^2 n / l^2   (plus the decoupled vacuum)
 */
inline std::vector<std::size_t> stabilized_indices(std::size_t n, int l, std::size_t K,
                                                   Level level) {
    if (l < 1) {
        throw ValueError("period multiple l must be >= 1");
    }
    const std::uint64_t l2 = static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(l);
    const std::uint64_t base = level == Level::excited ? n + 1 : n;
    std::vector<std::size_t> out;
    if (level == Level::ground) {
        out.push_back(0);
        if (base == 0) {
            return out;
        }
    }
    const std::uint64_t offset = level == Level::excited ? 1 : 0;
    for (std::uint64_t j = 1;; ++j) {
        const std::uint64_t num = j * j * base;
        if (num / l2 >= K + offset) {
            break;
        }
        if (num % l2 == 0) {
            const std::uint64_t k = num / l2 - offset;
            if (k < K && (out.empty() || out.back() != k)) {
                out.push_back(static_cast<std::size_t>(k));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Initial coherent amplitudes and truncation

struct InitialAmplitude {
    double alpha = 0.0;
    /// Second mode, Bell targets only.
    std::optional<double> beta;
};

namespace detail {
inline double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }
} // namespace detail

/**
 * Real positive coherent amplitude(s) whose Fock weights reproduce the target
 * ratio: |alpha|^2 = n for |n>; alpha = (cn sqrt(n!)/c0)^{1/n};
 * alpha = (cmn m!/c00)^{1/2m}, beta = (cmn n!/c00)^{1/2n}.
 */
inline InitialAmplitude initial_amplitude(const TargetSpec &target) {
    validate(target);
    return std::visit(
        [](const auto &t) -> InitialAmplitude {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, FockTarget>) {
                return {std::sqrt(static_cast<double>(t.n)), std::nullopt};
            } else if constexpr (std::is_same_v<T, SuperposedTarget>) {
                const double log_ratio = std::log(std::abs(t.cn) / std::abs(t.c0));
                const double nd = static_cast<double>(t.n);
                return {std::exp((log_ratio + 0.5 * detail::log_factorial(t.n)) / nd),
                        std::nullopt};
            } else {
                const double log_ratio = std::log(std::abs(t.cmn) / std::abs(t.c00));
                const double md = static_cast<double>(t.m);
                const double nd = static_cast<double>(t.n);
                return {std::exp((log_ratio + detail::log_factorial(t.m)) / (2.0 * md)),
                        std::exp((log_ratio + detail::log_factorial(t.n)) / (2.0 * nd))};
            }
        },
        target);
}

/// Truncation per mode (K_b = 1 for single-mode targets).
struct Truncation {
    std::size_t dim_a = 1;
    std::size_t dim_b = 1;
    friend bool operator==(const Truncation &, const Truncation &) = default;
};

inline Truncation default_truncation(const TargetSpec &target) {
    const auto amp = initial_amplitude(target);
    return std::visit(
        [&](const auto &t) -> Truncation {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, BellTarget>) {
                return {default_truncation(amp.alpha * amp.alpha, t.m + 2),
                        default_truncation(*amp.beta * *amp.beta, t.n + 2)};
            } else {
                return {default_truncation(amp.alpha * amp.alpha, t.n + 2), 1};
            }
        },
        target);
}

inline FockVector initial_single_mode_state(const TargetSpec &target, std::size_t K) {
    if (is_two_mode(target)) {
        throw InconsistentStrategy("Bell targets need a two-mode initial state");
    }
    return coherent_state(initial_amplitude(target).alpha, K);
}

inline TwoModeState initial_two_mode_state(const TargetSpec &target, Truncation dims) {
    if (!is_two_mode(target)) {
        throw InconsistentStrategy("single-mode targets need a single-mode initial state");
    }
    const auto amp = initial_amplitude(target);
    return product_state(coherent_state(amp.alpha, dims.dim_a),
                         coherent_state(*amp.beta, dims.dim_b));
}

/// Target with the given branch sign (+1 / -1); Fock targets ignore the sign.
inline FockVector single_mode_target_state(const TargetSpec &target, std::size_t K,
                                           int sign_override = 0) {
    validate(target);
    if (const auto *f = std::get_if<FockTarget>(&target)) {
        return FockVector::number_state(f->n, K);
    }
    const auto *s = std::get_if<SuperposedTarget>(&target);
    if (s == nullptr) {
        throw InconsistentStrategy("Bell target is not a single-mode state");
    }
    if (s->n >= K) {
        throw DimensionMismatch("target index outside truncation");
    }
    const int sign = sign_override != 0 ? sign_override : s->sign;
    std::vector<Complex> amps(K, 0.0);
    amps[0] = s->c0;
    amps[s->n] = static_cast<double>(sign) * s->cn;
    return FockVector(std::move(amps));
}

inline TwoModeState two_mode_target_state(const TargetSpec &target, Truncation dims,
                                          int sign_override = 0) {
    validate(target);
    const auto *b = std::get_if<BellTarget>(&target);
    if (b == nullptr) {
        throw InconsistentStrategy("only Bell targets are two-mode states");
    }
    if (b->m >= dims.dim_a || b->n >= dims.dim_b) {
        throw DimensionMismatch("target index outside truncation");
    }
    const int sign = sign_override != 0 ? sign_override : b->sign;
    std::vector<Complex> amps(dims.dim_a * dims.dim_b, 0.0);
    amps[0] = b->c00;
    amps[b->m * dims.dim_b + b->n] = static_cast<double>(sign) * b->cmn;
    return TwoModeState(dims.dim_a, dims.dim_b, std::move(amps));
}

// ---------------------------------------------------------------------------
// Strategies

struct UniformStrategy {
    friend bool operator==(const UniformStrategy &, const UniformStrategy &) = default;
};

/// S_l^(q)
struct HybridStrategy {
    int l = 1;
    int q = 0;
    friend bool operator==(const HybridStrategy &, const HybridStrategy &) = default;
};

/// S_l^(q,L) with a coupling switch after cycle L.
struct TwoModeHybridStrategy {
    int l = 1;
    int q = 0;
    int L = 0;
    TwoModeParams before{0.05, 0.03, 0.0};
    TwoModeParams after{0.03, 0.05, 0.0};
    friend bool operator==(const TwoModeHybridStrategy &,
                           const TwoModeHybridStrategy &) = default;
};

struct StrategySpec {
    std::variant<UniformStrategy, HybridStrategy, TwoModeHybridStrategy> kind;
    int cycles = 20;

    void validate() const {
        if (cycles < 1) {
            throw ValueError("total cycles N must be >= 1");
        }
        std::visit(
            [&](const auto &s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (!std::is_same_v<T, UniformStrategy>) {
                    if (s.l < 1) {
                        throw ValueError("strategy l must be >= 1");
                    }
                    if (s.q < 0 || s.q > cycles) {
                        throw ValueError("strategy q must satisfy 0 <= q <= N");
                    }
                }
                if constexpr (std::is_same_v<T, TwoModeHybridStrategy>) {
                    if (s.L < s.q || s.L > cycles) {
                        throw ValueError("strategy L must satisfy q <= L <= N");
                    }
                    s.before.validate();
                    s.after.validate();
                }
            },
            kind);
    }
    friend bool operator==(const StrategySpec &, const StrategySpec &) = default;
};

inline Schedule build_schedule(const TargetSpec &target, const StrategySpec &strategy,
                               const SystemParams &params) {
    validate(target);
    strategy.validate();
    params.validate();
    if (is_two_mode(target)) {
        throw InconsistentStrategy("Bell targets need two-mode parameters");
    }
    if (std::holds_alternative<TwoModeHybridStrategy>(strategy.kind)) {
        throw InconsistentStrategy("two-mode strategy used with a single-mode target");
    }
    Level level = Level::excited;
    double base = 0.0;
    if (const auto *f = std::get_if<FockTarget>(&target)) {
        base = tau_excited(f->n, 1, params);
    } else {
        level = Level::ground;
        base = tau_ground(std::get<SuperposedTarget>(target).n, 1, params);
    }
    int q = strategy.cycles;
    int l = 1;
    if (const auto *h = std::get_if<HybridStrategy>(&strategy.kind)) {
        q = h->q;
        l = h->l;
    }
    Schedule out;
    out.reserve(static_cast<std::size_t>(strategy.cycles));
    for (int i = 1; i <= strategy.cycles; ++i) {
        out.push_back({i <= q ? base : l * base, level, params});
    }
    return out;
}

inline TwoModeSchedule build_schedule(const TargetSpec &target, const StrategySpec &strategy,
                                      const TwoModeParams &params) {
    validate(target);
    strategy.validate();
    params.validate();
    const auto *bell = std::get_if<BellTarget>(&target);
    if (bell == nullptr) {
        throw InconsistentStrategy("two-mode parameters used with a single-mode target");
    }
    auto base = [&](const TwoModeParams &p) { return tau_bell(bell->m, bell->n, 1, p); };
    TwoModeSchedule out;
    out.reserve(static_cast<std::size_t>(strategy.cycles));
    std::visit(
        [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            for (int i = 1; i <= strategy.cycles; ++i) {
                if constexpr (std::is_same_v<T, UniformStrategy>) {
                    out.push_back({base(params), params});
                } else if constexpr (std::is_same_v<T, HybridStrategy>) {
                    out.push_back({i <= s.q ? base(params) : s.l * base(params), params});
                } else {
                    const bool switched = i > s.L;
                    const TwoModeParams &p = switched ? s.after : s.before;
                    const bool short_period = switched ? i <= s.L + s.q : i <= s.q;
                    out.push_back({short_period ? base(p) : s.l * base(p), p});
                }
            }
        },
        strategy.kind);
    return out;
}

// ---------------------------------------------------------------------------
// Optimizer

/// max over the target's sign branches of the fidelity; for superposed and
/// Bell targets this is the parity-matched F_+ or F_-.
template <PureState S>
double branch_fidelity(const EvolutionEntry<S> &entry) {
    return *std::max_element(entry.fidelities.begin(), entry.fidelities.end());
}

inline std::vector<FockVector> single_mode_branches(const TargetSpec &target, std::size_t K) {
    if (std::holds_alternative<FockTarget>(target)) {
        return {single_mode_target_state(target, K)};
    }
    return {single_mode_target_state(target, K, +1), single_mode_target_state(target, K, -1)};
}

inline std::vector<TwoModeState> two_mode_branches(const TargetSpec &target, Truncation dims) {
    return {two_mode_target_state(target, dims, +1), two_mode_target_state(target, dims, -1)};
}

struct SearchSpace {
    std::vector<int> ls{1, 2, 3};
    std::vector<int> qs{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    /// Coupling-switch rounds; two-mode only.
    std::vector<int> Ls{};
};

struct Candidate {
    StrategySpec strategy;
    double fidelity = 0.0;
    double success = 0.0;
};

struct OptimizationResult {
    Candidate best;
    std::vector<Candidate> evaluated;
};

namespace detail {

inline std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Strictly better under: higher fidelity, then higher success. Equal pairs
/// keep the earlier candidate, and candidates arrive in (l, q, L) order.
inline bool better(const Candidate &a, const Candidate &b) {
    if (a.fidelity != b.fidelity) {
        return a.fidelity > b.fidelity;
    }
    return a.success > b.success;
}

inline OptimizationResult pick_best(std::vector<Candidate> evaluated) {
    if (evaluated.empty()) {
        throw ConfigError("optimizer search space has no valid candidate for this budget");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < evaluated.size(); ++i) {
        if (better(evaluated[i], evaluated[best])) {
            best = i;
        }
    }
    OptimizationResult result;
    result.best = evaluated[best];
    result.evaluated = std::move(evaluated);
    return result;
}

} // namespace detail

/// Exhaustive search over S_l^(q) for a single-mode target.
inline OptimizationResult optimize_schedule(const TargetSpec &target, const SystemParams &params,
                                            int cycle_budget, const SearchSpace &space,
                                            std::optional<std::size_t> truncation = {}) {
    if (cycle_budget < 1) {
        throw ValueError("cycle budget must be >= 1");
    }
    const std::size_t K = truncation.value_or(default_truncation(target).dim_a);
    const FockVector initial = initial_single_mode_state(target, K);
    const auto branches = single_mode_branches(target, K);
    std::vector<Candidate> evaluated;
    for (int l : detail::sorted_unique(space.ls)) {
        for (int q : detail::sorted_unique(space.qs)) {
            if (l < 1 || q < 0 || q > cycle_budget) {
                continue;
            }
            StrategySpec strategy{HybridStrategy{l, q}, cycle_budget};
            const auto record =
                run_postselected(initial, build_schedule(target, strategy, params), branches);
            evaluated.push_back({strategy, branch_fidelity(record.final()), record.final().success});
        }
    }
    return detail::pick_best(std::move(evaluated));
}

/// Exhaustive search over S_l^(q,L) for a Bell target.
inline OptimizationResult optimize_schedule(const TargetSpec &target, const TwoModeParams &before,
                                            const TwoModeParams &after, int cycle_budget,
                                            const SearchSpace &space,
                                            std::optional<Truncation> truncation = {}) {
    if (cycle_budget < 1) {
        throw ValueError("cycle budget must be >= 1");
    }
    const Truncation dims = truncation.value_or(default_truncation(target));
    const TwoModeState initial = initial_two_mode_state(target, dims);
    const auto branches = two_mode_branches(target, dims);
    const std::vector<int> Ls =
        space.Ls.empty() ? std::vector<int>{cycle_budget} : detail::sorted_unique(space.Ls);
    std::vector<Candidate> evaluated;
    for (int l : detail::sorted_unique(space.ls)) {
        for (int q : detail::sorted_unique(space.qs)) {
            for (int L : Ls) {
                if (l < 1 || q < 0 || q > cycle_budget || L < q || L > cycle_budget) {
                    continue;
                }
                StrategySpec strategy{TwoModeHybridStrategy{l, q, L, before, after},
                                      cycle_budget};
                const auto record =
                    run_postselected(initial, build_schedule(target, strategy, before), branches);
                evaluated.push_back(
                    {strategy, branch_fidelity(record.final()), record.final().success});
            }
        }
    }
    return detail::pick_best(std::move(evaluated));
}

} // namespace fockgen
