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
 * Turns a RunConfig into CSV output plus a JSON manifest, and knows the
 * figure-reproduction presets.
 *
 * CSV layouts (numbers with 12 significant digits):
 *   Fock targets                 N,fidelity,success_prob
 *   superposed / Bell targets    N,fidelity_plus,fidelity_minus,success_prob
 *   trajectories mode            N,failures,empirical_survival,success_prob
 */

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fockgen/config.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"
#include "fockgen/metrics.hpp"
#include "fockgen/protocol.hpp"
#include "fockgen/schedule.hpp"
#include "fockgen/version.hpp"

namespace fockgen {

inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

struct RunArtifacts {
    std::string csv;
    nlohmann::json summary;
};

namespace detail {

class CsvWriter {
  public:
    explicit CsvWriter(const std::string &header) { out_ += header + "\n"; }

    template <class... Values>
    void row(long long first, const Values &...rest) {
        out_ += std::to_string(first);
        ((out_ += "," + cell(rest)), ...);
        out_ += "\n";
    }

    std::string str() && { return std::move(out_); }

  private:
    template <class T>
    static std::string cell(T v) {
        if constexpr (std::is_integral_v<T>) {
            return std::to_string(v);
        } else {
            return format_number(static_cast<double>(v));
        }
    }

    std::string out_;
};

template <PureState S>
RunArtifacts postselected_csv(const EvolutionRecord<S> &record, bool pair) {
    CsvWriter csv(pair ? "N,fidelity_plus,fidelity_minus,success_prob"
                       : "N,fidelity,success_prob");
    for (const auto &e : record.entries) {
        if (pair) {
            csv.row(e.cycle, e.fidelities.at(0), e.fidelities.at(1), e.success);
        } else {
            csv.row(e.cycle, e.fidelities.at(0), e.success);
        }
    }
    const auto &last = record.final();
    nlohmann::json summary{{"cycles", last.cycle}, {"final_success_prob", last.success}};
    if (pair) {
        summary["final_fidelity_plus"] = last.fidelities.at(0);
        summary["final_fidelity_minus"] = last.fidelities.at(1);
    } else {
        summary["final_fidelity"] = last.fidelities.at(0);
    }
    return {std::move(csv).str(), std::move(summary)};
}

template <PureState S, class Cycle>
RunArtifacts trajectories_csv(const S &initial, const std::vector<Cycle> &schedule,
                              const std::vector<S> &branches, const RunConfig &cfg,
                              unsigned threads) {
    const auto record = run_postselected(initial, schedule, branches);
    // Score accepted runs against the branch the all-success state ends in.
    std::size_t best = 0;
    for (std::size_t i = 1; i < branches.size(); ++i) {
        if (record.final().fidelities[i] > record.final().fidelities[best]) {
            best = i;
        }
    }
    const auto ensemble =
        trajectory_ensemble(initial, schedule, branches[best], cfg.trajectories, cfg.seed,
                            EnsembleOptions{cfg.max_restarts, threads});
    CsvWriter csv("N,failures,empirical_survival,success_prob");
    const auto &stats = ensemble.stats;
    csv.row(0, 0ULL, 1.0, 1.0);
    unsigned long long failed = 0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        failed += stats.failures_at_cycle[i];
        const double survival =
            1.0 - static_cast<double>(failed) / static_cast<double>(stats.attempts);
        csv.row(static_cast<long long>(i + 1),
                static_cast<unsigned long long>(stats.failures_at_cycle[i]), survival,
                record.at_cycle(static_cast<int>(i + 1)).success);
    }
    nlohmann::json summary{{"trajectories", ensemble.trajectories},
                           {"accepted_trajectories", ensemble.accepted_trajectories},
                           {"attempts", stats.attempts},
                           {"accepted_full_runs", stats.accepted_full_runs},
                           {"acceptance_frequency", stats.acceptance_frequency()},
                           {"postselected_success_prob", record.final().success},
                           {"total_cycles", stats.total_cycles},
                           {"mean_final_fidelity", ensemble.mean_final_fidelity},
                           {"min_agreement_with_postselected",
                            ensemble.min_agreement_with_postselected}};
    return {std::move(csv).str(), std::move(summary)};
}

inline RunArtifacts run_single_mode(const RunConfig &cfg, unsigned threads) {
    const auto &params = std::get<SystemParams>(cfg.params);
    const std::size_t K = cfg.resolved_truncation().dim_a;
    const FockVector initial = initial_single_mode_state(cfg.target, K);
    const Schedule schedule = build_schedule(cfg.target, cfg.strategy, params);
    const auto branches = single_mode_branches(cfg.target, K);
    const bool pair = branches.size() == 2;

    switch (cfg.mode) {
    case RunMode::postselected:
        return postselected_csv(run_postselected(initial, schedule, branches), pair);
    case RunMode::trajectories:
        return trajectories_csv(initial, schedule, branches, cfg, threads);
    case RunMode::closed_form:
        break;
    }
    if (!std::holds_alternative<UniformStrategy>(cfg.strategy.kind)) {
        throw ConfigError("closed_form requires the uniform strategy");
    }
    const double tau = schedule.front().tau;
    const double alpha = initial_amplitude(cfg.target).alpha;
    CsvWriter csv(pair ? "N,fidelity_plus,fidelity_minus,success_prob"
                       : "N,fidelity,success_prob");
    nlohmann::json summary;
    for (int n = 0; n <= cfg.strategy.cycles; ++n) {
        if (const auto *f = std::get_if<FockTarget>(&cfg.target)) {
            const double F = fock_fidelity_closed_form(f->n, n, tau, params, alpha, K);
            const double P = success_closed_form(Level::excited, n, tau, params, alpha, K);
            csv.row(n, F, P);
            summary = {{"final_fidelity", F}, {"final_success_prob", P}};
        } else {
            const auto F = superposed_fidelity_closed_form(std::get<SuperposedTarget>(cfg.target),
                                                           n, tau, params, alpha, K);
            csv.row(n, F.plus, F.minus, F.success);
            summary = {{"final_fidelity_plus", F.plus},
                       {"final_fidelity_minus", F.minus},
                       {"final_success_prob", F.success}};
        }
    }
    summary["cycles"] = cfg.strategy.cycles;
    return {std::move(csv).str(), std::move(summary)};
}

inline RunArtifacts run_two_mode(const RunConfig &cfg, unsigned threads) {
    const auto &params = std::get<TwoModeParams>(cfg.params);
    const Truncation dims = cfg.resolved_truncation();
    const TwoModeState initial = initial_two_mode_state(cfg.target, dims);
    const TwoModeSchedule schedule = build_schedule(cfg.target, cfg.strategy, params);
    const auto branches = two_mode_branches(cfg.target, dims);

    switch (cfg.mode) {
    case RunMode::postselected:
        return postselected_csv(run_postselected(initial, schedule, branches), true);
    case RunMode::trajectories:
        return trajectories_csv(initial, schedule, branches, cfg, threads);
    case RunMode::closed_form:
        break;
    }
    if (!std::holds_alternative<UniformStrategy>(cfg.strategy.kind)) {
        throw ConfigError("closed_form requires the uniform strategy");
    }
    const auto amp = initial_amplitude(cfg.target);
    const auto &bell = std::get<BellTarget>(cfg.target);
    CsvWriter csv("N,fidelity_plus,fidelity_minus,success_prob");
    nlohmann::json summary;
    for (int n = 0; n <= cfg.strategy.cycles; ++n) {
        const auto F = bell_fidelity_closed_form(bell, n, schedule.front().tau, params, amp.alpha,
                                                 *amp.beta, dims);
        csv.row(n, F.plus, F.minus, F.success);
        summary = {{"final_fidelity_plus", F.plus},
                   {"final_fidelity_minus", F.minus},
                   {"final_success_prob", F.success}};
    }
    summary["cycles"] = cfg.strategy.cycles;
    return {std::move(csv).str(), std::move(summary)};
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

} // namespace detail

/// Execute a configuration in memory. `threads` only affects trajectory mode
/// and never the result.
inline RunArtifacts run(const RunConfig &cfg, unsigned threads = 0) {
    validate(cfg.target);
    cfg.strategy.validate();
    return is_two_mode(cfg.target) ? detail::run_two_mode(cfg, threads)
                                   : detail::run_single_mode(cfg, threads);
}

inline nlohmann::json make_manifest(const RunConfig &cfg, const nlohmann::json &summary,
                                    double wall_seconds) {
    return nlohmann::json{{"config", config_to_json(cfg)},
                          {"seed", cfg.seed},
                          {"version", FOCKGEN_VERSION},
                          {"wall_time_seconds", wall_seconds},
                          {"summary", summary}};
}

/// Runs `cfg`, writes the CSV to `csv_path` and the manifest next to it
/// (`<csv_path>.manifest.json`).
inline RunArtifacts write_run(const RunConfig &cfg, const std::filesystem::path &csv_path,
                              unsigned threads = 0) {
    const auto start = std::chrono::steady_clock::now();
    auto artifacts = run(cfg, threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_text(csv_path, artifacts.csv);
    std::filesystem::path manifest = csv_path;
    manifest += ".manifest.json";
    detail::write_text(manifest, make_manifest(cfg, artifacts.summary, wall).dump(2) + "\n");
    return artifacts;
}

// ---------------------------------------------------------------------------
// Presets

inline std::vector<std::string> list_presets() {
    return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig7", "fig8", "fig9"};
}

namespace detail {

inline RunConfig fock_config(std::size_t n, StrategySpec strategy) {
    RunConfig cfg;
    cfg.target = FockTarget{n};
    cfg.strategy = strategy;
    return cfg;
}

inline RunConfig superposed_config(std::size_t n, StrategySpec strategy) {
    RunConfig cfg;
    cfg.target = SuperposedTarget{n};
    cfg.strategy = strategy;
    return cfg;
}

inline RunConfig bell_config(std::size_t n, StrategySpec strategy) {
    RunConfig cfg;
    cfg.target = BellTarget{n, n};
    cfg.params = TwoModeParams{0.05, 0.03, 0.0};
    cfg.strategy = strategy;
    return cfg;
}

inline StrategySpec two_mode_hybrid(int l, int q, int L, int cycles) {
    return StrategySpec{TwoModeHybridStrategy{l, q, L, TwoModeParams{0.05, 0.03, 0.0},
                                              TwoModeParams{0.03, 0.05, 0.0}},
                        cycles};
}

/// |lambda_k(l tau_n)|^{2N} against k for the Fock-state filter.
inline std::string fock_reduction_profile_csv(std::size_t n, std::size_t K) {
    const SystemParams params{};
    const std::vector<std::pair<int, int>> curves{{1, 1}, {5, 1}, {5, 2}, {5, 3}}; // (N, l)
    std::vector<DiagonalKraus> kraus;
    for (const auto &[cycles, l] : curves) {
        kraus.push_back(kraus_diagonal(Level::excited, tau_excited(n, l, params), params, K));
    }
    CsvWriter csv("k,N1_l1,N5_l1,N5_l2,N5_l3");
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> v;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            v.push_back(std::pow(std::norm(kraus[c][k]), curves[c].first));
        }
        csv.row(static_cast<long long>(k), v[0], v[1], v[2], v[3]);
    }
    return std::move(csv).str();
}

inline std::string two_mode_profile_csv(const TwoModeParams &params, int l, int cycles,
                                        std::size_t K) {
    const auto kraus = two_mode_kraus(tau_bell(4, 4, l, params), params, K, K);
    CsvWriter csv("k,kp,reduction_factor");
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t kp = 0; kp < K; ++kp) {
            csv.row(static_cast<long long>(k), static_cast<long long>(kp),
                    std::pow(std::norm(kraus.at(k, kp)), cycles));
        }
    }
    return std::move(csv).str();
}

inline std::string density_csv(const FockVector &state) {
    const auto view = density_view(state);
    CsvWriter csv("k,kp,re,im");
    for (std::size_t k = 0; k < view.dim(); ++k) {
        for (std::size_t kp = 0; kp < view.dim(); ++kp) {
            const Complex rho = view.element(k, kp);
            csv.row(static_cast<long long>(k), static_cast<long long>(kp), rho.real(), rho.imag());
        }
    }
    return std::move(csv).str();
}

} // namespace detail

/// (file name, config) pairs of the run-based part of a preset.
inline std::vector<std::pair<std::string, RunConfig>> preset_configs(const std::string &name) {
    using detail::bell_config;
    using detail::fock_config;
    using detail::superposed_config;
    using detail::two_mode_hybrid;
    std::vector<std::pair<std::string, RunConfig>> out;
    if (name == "fig3") {
        for (std::size_t n : {5, 10}) {
            const std::string p = "fig3_n" + std::to_string(n);
            out.emplace_back(p + "_uniform.csv", fock_config(n, {UniformStrategy{}, 30}));
            out.emplace_back(p + "_S2_q5.csv", fock_config(n, {HybridStrategy{2, 5}, 30}));
            out.emplace_back(p + "_S3_q5.csv", fock_config(n, {HybridStrategy{3, 5}, 30}));
        }
    } else if (name == "fig4") {
        for (std::size_t n : {2, 4, 6, 8, 10}) {
            out.emplace_back("fig4_n" + std::to_string(n) + "_S3_q5.csv",
                             fock_config(n, {HybridStrategy{3, 5}, 30}));
        }
    } else if (name == "fig5") {
        out.emplace_back("fig5_n5_uniform.csv", superposed_config(5, {UniformStrategy{}, 30}));
        out.emplace_back("fig5_n5_S3_q5.csv", superposed_config(5, {HybridStrategy{3, 5}, 30}));
    } else if (name == "fig7") {
        for (std::size_t n : {2, 4, 6, 8}) {
            out.emplace_back("fig7_n" + std::to_string(n) + "_S3_q5.csv",
                             superposed_config(n, {HybridStrategy{3, 5}, 30}));
        }
    } else if (name == "fig8") {
        out.emplace_back("fig8_n4_uniform.csv", bell_config(4, {UniformStrategy{}, 40}));
        out.emplace_back("fig8_n4_S3_q5_L15.csv", bell_config(4, two_mode_hybrid(3, 5, 15, 40)));
    } else if (name == "fig9") {
        out.emplace_back("fig9_n1_S3_q5_L8.csv", bell_config(1, two_mode_hybrid(3, 5, 8, 40)));
        out.emplace_back("fig9_n3_S3_q5_L8.csv", bell_config(3, two_mode_hybrid(3, 5, 8, 40)));
        out.emplace_back("fig9_n5_S3_q5_L8.csv", bell_config(5, two_mode_hybrid(3, 5, 8, 40)));
        out.emplace_back("fig9_n5_S3_q5_L15.csv", bell_config(5, two_mode_hybrid(3, 5, 15, 40)));
    } else if (name != "fig2a" && name != "fig2b") {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return out;
}

/// Writes every CSV of a preset into `dir` plus `<name>.manifest.json`;
/// returns the CSV paths.
inline std::vector<std::filesystem::path> run_preset(const std::string &name,
                                                     const std::filesystem::path &dir,
                                                     unsigned threads = 0) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::filesystem::path> written;
    nlohmann::json runs = nlohmann::json::array();
    auto emit = [&](const std::string &file, const std::string &text) {
        detail::write_text(dir / file, text);
        written.push_back(dir / file);
    };

    for (const auto &[file, cfg] : preset_configs(name)) {
        auto artifacts = run(cfg, threads);
        emit(file, artifacts.csv);
        runs.push_back({{"csv", file}, {"config", config_to_json(cfg)}, {"summary", artifacts.summary}});
    }
    if (name == "fig2a") {
        emit("fig2a_profile_n5.csv", detail::fock_reduction_profile_csv(5, 60));
    } else if (name == "fig2b") {
        emit("fig2b_profile_n10.csv", detail::fock_reduction_profile_csv(10, 100));
    } else if (name == "fig5") {
        // Density matrices after N = 10 and N = 11 cycles.
        for (const auto &[tag, strategy] :
             {std::pair<std::string, StrategySpec>{"uniform", {UniformStrategy{}, 11}},
              std::pair<std::string, StrategySpec>{"S3_q5", {HybridStrategy{3, 5}, 11}}}) {
            const TargetSpec target = SuperposedTarget{5};
            const std::size_t K = default_truncation(target).dim_a;
            const auto record = run_postselected(
                initial_single_mode_state(target, K),
                build_schedule(target, strategy, SystemParams{}),
                single_mode_branches(target, K), RunOptions{.keep_snapshots = true});
            for (int n : {10, 11}) {
                emit("fig5_density_" + tag + "_N" + std::to_string(n) + ".csv",
                     detail::density_csv(*record.at_cycle(n).snapshot));
            }
        }
    } else if (name == "fig8") {
        const TwoModeParams a{0.03, 0.05, 0.0};
        const TwoModeParams b{0.05, 0.03, 0.0};
        emit("fig8_profile_ga003_gb005_l1.csv", detail::two_mode_profile_csv(a, 1, 5, 31));
        emit("fig8_profile_ga005_gb003_l1.csv", detail::two_mode_profile_csv(b, 1, 5, 31));
        emit("fig8_profile_ga003_gb005_l3.csv", detail::two_mode_profile_csv(a, 3, 5, 31));
        emit("fig8_profile_ga005_gb003_l3.csv", detail::two_mode_profile_csv(b, 3, 5, 31));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json files = nlohmann::json::array();
    for (const auto &p : written) {
        files.push_back(p.filename().string());
    }
    detail::write_text(dir / (name + ".manifest.json"),
                       nlohmann::json{{"preset", name},
                                      {"version", FOCKGEN_VERSION},
                                      {"wall_time_seconds", wall},
                                      {"files", files},
                                      {"runs", runs}}
                               .dump(2) +
                           "\n");
    return written;
}

} // namespace fockgen
