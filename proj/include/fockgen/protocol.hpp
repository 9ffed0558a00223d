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
 * Evolution-and-measurement cycles. Each cycle applies the diagonal Kraus
 * operator of the post-selected ancilla outcome; a failed measurement restarts
 * the whole protocol from the initial state.
 *
 * Two drivers are provided: run_postselected follows the all-success branch
 * deterministically and tracks the cumulative success probability P(N);
 * sample_trajectory / trajectory_ensemble draw measurement outcomes.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"
#include "fockgen/jc_kernel.hpp"

namespace fockgen {

/// One single-mode cycle: evolve for tau with `params`, measure `level`.
struct CycleSpec {
    double tau = 0.0;
    Level level = Level::excited;
    SystemParams params{};

    friend bool operator==(const CycleSpec &, const CycleSpec &) = default;
};

/// One two-mode cycle; the qutrit is always prepared and measured in |g>.
struct TwoModeCycleSpec {
    double tau = 0.0;
    TwoModeParams params{};

    friend bool operator==(const TwoModeCycleSpec &, const TwoModeCycleSpec &) = default;
};

using Schedule = std::vector<CycleSpec>;
using TwoModeSchedule = std::vector<TwoModeCycleSpec>;

inline DiagonalKraus kraus_for(const CycleSpec &cycle, const FockVector &state) {
    return kraus_diagonal(cycle.level, cycle.tau, cycle.params, state.size());
}

inline TwoModeKraus kraus_for(const TwoModeCycleSpec &cycle, const TwoModeState &state) {
    return two_mode_kraus(cycle.tau, cycle.params, state.dim_a(), state.dim_b());
}

template <class Cycle, class S>
concept CycleFor = PureState<S> && requires(const Cycle &c, const S &s) {
    { c.tau } -> std::convertible_to<double>;
    kraus_for(c, s);
};

template <PureState S>
struct CycleOutcome {
    S state;
    double p_success;
};

/// Below this the post-selected branch is treated as dead.
inline constexpr double kVanishingProbability = 1e-300;

namespace detail {

template <class CoeffAt>
std::pair<std::vector<Complex>, double> apply_diagonal(std::span<const Complex> amps,
                                                       CoeffAt &&coeff_at) {
    std::vector<Complex> out(amps.size());
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out[i] = coeff_at(i) * amps[i];
        p += std::norm(out[i]);
    }
    if (!(p >= kVanishingProbability)) {
        throw VanishingBranch("post-selected branch probability " + std::to_string(p) +
                              " is numerically zero");
    }
    const double inv = 1.0 / std::sqrt(p);
    for (auto &c : out) {
        c *= inv;
    }
    return {std::move(out), p};
}

} // namespace detail

/// One cycle on the all-success branch: p = sum |lambda_k c_k|^2, state -> V c / sqrt(p).
inline CycleOutcome<FockVector> apply_cycle(const FockVector &state, const DiagonalKraus &kraus) {
    if (kraus.size() < state.size()) {
        throw DimensionMismatch("Kraus operator smaller than the state truncation");
    }
    auto [amps, p] = detail::apply_diagonal(state.amps(), [&](std::size_t k) { return kraus[k]; });
    return {FockVector(std::move(amps)), p};
}

inline CycleOutcome<TwoModeState> apply_cycle(const TwoModeState &state,
                                              const TwoModeKraus &kraus) {
    if (kraus.dim_a() < state.dim_a() || kraus.dim_b() < state.dim_b()) {
        throw DimensionMismatch("two-mode Kraus operator smaller than the state truncation");
    }
    const std::size_t db = state.dim_b();
    auto [amps, p] = detail::apply_diagonal(
        state.amps(), [&](std::size_t i) { return kraus.at(i / db, i % db); });
    return {TwoModeState(state.dim_a(), state.dim_b(), std::move(amps)), p};
}

template <PureState S>
struct EvolutionEntry {
    int cycle = 0;
    /// Fidelity to each requested target, in request order.
    std::vector<double> fidelities;
    /// Cumulative success probability P(N).
    double success = 1.0;
    std::optional<S> snapshot;

    double fidelity() const { return fidelities.at(0); }
};

/// Entry N = 0 is the initial state (P = 1), then one entry per cycle.
template <PureState S>
struct EvolutionRecord {
    std::vector<EvolutionEntry<S>> entries;

    const EvolutionEntry<S> &at_cycle(int n) const { return entries.at(static_cast<std::size_t>(n)); }
    const EvolutionEntry<S> &final() const { return entries.back(); }
    int cycles() const { return static_cast<int>(entries.size()) - 1; }
};

struct RunOptions {
    bool keep_snapshots = false;
};

template <PureState S, class Cycle>
    requires CycleFor<Cycle, S>
EvolutionRecord<S> run_postselected(const S &initial, const std::vector<Cycle> &schedule,
                                    const std::vector<S> &targets, RunOptions options = {}) {
    if (schedule.empty()) {
        throw ConfigError("run_postselected needs a non-empty schedule");
    }
    if (targets.empty()) {
        throw ConfigError("run_postselected needs at least one target");
    }
    EvolutionRecord<S> record;
    record.entries.reserve(schedule.size() + 1);
    auto snapshot = [&](int n, const S &state, double success) {
        EvolutionEntry<S> entry;
        entry.cycle = n;
        entry.success = success;
        entry.fidelities.reserve(targets.size());
        for (const auto &t : targets) {
            entry.fidelities.push_back(fidelity(state, t));
        }
        if (options.keep_snapshots) {
            entry.snapshot = state;
        }
        record.entries.push_back(std::move(entry));
    };

    S state = initial.normalized();
    double success = 1.0;
    snapshot(0, state, success);
    int n = 0;
    for (const auto &cycle : schedule) {
        auto outcome = apply_cycle(state, kraus_for(cycle, state));
        state = std::move(outcome.state);
        success *= outcome.p_success;
        snapshot(++n, state, success);
    }
    return record;
}

template <PureState S, class Cycle>
    requires CycleFor<Cycle, S>
EvolutionRecord<S> run_postselected(const S &initial, const std::vector<Cycle> &schedule,
                                    const S &target, RunOptions options = {}) {
    return run_postselected(initial, schedule, std::vector<S>{target}, options);
}

/// Cost bookkeeping for restart-on-failure sampling.
struct TrajectoryStats {
    /// Protocol runs started from cycle 1 (first run plus restarts).
    std::uint64_t attempts = 0;
    /// Runs that passed every cycle.
    std::uint64_t accepted_full_runs = 0;
    /// failures_at_cycle[i]: runs that failed the measurement of cycle i + 1.
    std::vector<std::uint64_t> failures_at_cycle;
    /// Evolution-measurement cycles executed, failed ones included.
    std::uint64_t total_cycles = 0;

    void merge(const TrajectoryStats &other) {
        attempts += other.attempts;
        accepted_full_runs += other.accepted_full_runs;
        total_cycles += other.total_cycles;
        if (failures_at_cycle.size() < other.failures_at_cycle.size()) {
            failures_at_cycle.resize(other.failures_at_cycle.size(), 0);
        }
        for (std::size_t i = 0; i < other.failures_at_cycle.size(); ++i) {
            failures_at_cycle[i] += other.failures_at_cycle[i];
        }
    }

    /// Fraction of runs that completed; estimates P(N).
    double acceptance_frequency() const {
        return attempts == 0 ? 0.0
                             : static_cast<double>(accepted_full_runs) /
                                   static_cast<double>(attempts);
    }

    bool consistent() const {
        std::uint64_t failed = 0;
        std::uint64_t failed_cycles = 0;
        for (std::size_t i = 0; i < failures_at_cycle.size(); ++i) {
            failed += failures_at_cycle[i];
            failed_cycles += failures_at_cycle[i] * (i + 1);
        }
        return accepted_full_runs <= attempts && failed + accepted_full_runs == attempts &&
               failed_cycles + accepted_full_runs * failures_at_cycle.size() == total_cycles;
    }
};

/// Deterministic random stream; one per trajectory.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for trajectory `index` of an ensemble seeded with `master_seed`.
    static RngStream for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t x = master_seed;
        const std::uint64_t a = splitmix64(x);
        x ^= index * 0xD1B54A32D192ED03ULL;
        const std::uint64_t b = splitmix64(x);
        return RngStream(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t splitmix64(std::uint64_t &state) {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

struct TrajectoryOptions {
    std::uint64_t max_restarts = 1'000'000;
};

template <PureState S>
struct TrajectoryOutcome {
    bool accepted = false;
    TrajectoryStats stats;
    std::optional<S> final_state;
};

namespace detail {

template <PureState S, class Cycle>
auto compile_schedule(const S &initial, const std::vector<Cycle> &schedule) {
    std::vector<decltype(kraus_for(schedule.front(), initial))> out;
    out.reserve(schedule.size());
    for (const auto &cycle : schedule) {
        out.push_back(kraus_for(cycle, initial));
    }
    return out;
}

template <PureState S, class Kraus>
TrajectoryOutcome<S> sample_compiled(const S &initial, const std::vector<Kraus> &kraus,
                                     RngStream &rng, const TrajectoryOptions &options) {
    TrajectoryOutcome<S> result;
    result.stats.failures_at_cycle.assign(kraus.size(), 0);
    const S start = initial.normalized();
    for (std::uint64_t restarts = 0; restarts <= options.max_restarts; ++restarts) {
        ++result.stats.attempts;
        S state = start;
        bool failed = false;
        for (std::size_t i = 0; i < kraus.size(); ++i) {
            ++result.stats.total_cycles;
            // A vanishing branch is an ordinary failure here.
            double p = 0.0;
            std::optional<S> next;
            try {
                auto outcome = apply_cycle(state, kraus[i]);
                p = outcome.p_success;
                next = std::move(outcome.state);
            } catch (const VanishingBranch &) {
                p = 0.0;
            }
            if (!(rng.uniform() < p)) {
                ++result.stats.failures_at_cycle[i];
                failed = true;
                break;
            }
            state = std::move(*next);
        }
        if (!failed) {
            ++result.stats.accepted_full_runs;
            result.accepted = true;
            result.final_state = std::move(state);
            return result;
        }
    }
    return result;
}

} // namespace detail

/**
 * Draws measurement outcomes cycle by cycle (success with probability
 * p_success); a failure restarts from `initial` at cycle 1. Gives up after
 * `max_restarts` restarts, reported through `accepted == false`.
 */
template <PureState S, class Cycle>
    requires CycleFor<Cycle, S>
TrajectoryOutcome<S> sample_trajectory(const S &initial, const std::vector<Cycle> &schedule,
                                       RngStream &rng, TrajectoryOptions options = {}) {
    if (schedule.empty()) {
        throw ConfigError("sample_trajectory needs a non-empty schedule");
    }
    return detail::sample_compiled(initial, detail::compile_schedule(initial, schedule), rng,
                                   options);
}

struct EnsembleOptions {
    std::uint64_t max_restarts = 1'000'000;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct EnsembleResult {
    std::uint64_t trajectories = 0;
    std::uint64_t accepted_trajectories = 0;
    TrajectoryStats stats;
    /// Mean fidelity to the target over accepted trajectories.
    double mean_final_fidelity = 0.0;
    /// Smallest |<postselected|final>|^2 over accepted trajectories.
    double min_agreement_with_postselected = 1.0;
};

/**
 * n_traj independent trajectories. Trajectory i uses
 * RngStream::for_trajectory(master_seed, i) and results are reduced in index
 * order, so the output does not depend on the thread count.
 */
template <PureState S, class Cycle>
    requires CycleFor<Cycle, S>
EnsembleResult trajectory_ensemble(const S &initial, const std::vector<Cycle> &schedule,
                                   const S &target, std::uint64_t n_traj,
                                   std::uint64_t master_seed, EnsembleOptions options = {}) {
    if (n_traj == 0) {
        throw ConfigError("trajectory_ensemble needs n_traj >= 1");
    }
    if (schedule.empty()) {
        throw ConfigError("trajectory_ensemble needs a non-empty schedule");
    }
    const auto kraus = detail::compile_schedule(initial, schedule);
    const S reference = run_postselected(initial, schedule, std::vector<S>{target},
                                         RunOptions{.keep_snapshots = true})
                            .final()
                            .snapshot.value();

    struct Slot {
        TrajectoryStats stats;
        bool accepted = false;
        double fidelity = 0.0;
        double agreement = 1.0;
    };
    std::vector<Slot> slots(n_traj);
    const TrajectoryOptions traj_options{options.max_restarts};

    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::for_trajectory(master_seed, i);
            auto outcome = detail::sample_compiled(initial, kraus, rng, traj_options);
            Slot &slot = slots[i];
            slot.stats = std::move(outcome.stats);
            slot.accepted = outcome.accepted;
            if (outcome.accepted) {
                slot.fidelity = fidelity(*outcome.final_state, target);
                slot.agreement = fidelity(*outcome.final_state, reference);
            }
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, n_traj));
    if (threads == 1) {
        work(0, n_traj);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (n_traj + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = t * chunk;
            const std::uint64_t end = std::min<std::uint64_t>(n_traj, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }

    EnsembleResult result;
    result.trajectories = n_traj;
    result.stats.failures_at_cycle.assign(schedule.size(), 0);
    double fidelity_sum = 0.0;
    for (const auto &slot : slots) {
        result.stats.merge(slot.stats);
        if (slot.accepted) {
            ++result.accepted_trajectories;
            fidelity_sum += slot.fidelity;
            result.min_agreement_with_postselected =
                std::min(result.min_agreement_with_postselected, slot.agreement);
        }
    }
    if (result.accepted_trajectories > 0) {
        result.mean_final_fidelity =
            fidelity_sum / static_cast<double>(result.accepted_trajectories);
    }
    return result;
}

} // namespace fockgen
