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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fockgen/config.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/runner.hpp"
#include "fockgen/schedule.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

constexpr const char *kUnits =
    "Units: frequencies in units of the qubit splitting w_e (single mode) or of w_b "
    "(two modes), times in the inverse unit, hbar = 1.";

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw fockgen::ConfigError("cannot read config '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Overrides {
    std::int64_t seed = -1;
    std::int64_t trajectories = -1;
    std::int64_t truncation = -1;
    std::string out;
    unsigned threads = 0;
};

fockgen::RunConfig load_config(const std::string &path, const Overrides &o) {
    auto cfg = fockgen::parse_config(read_file(path));
    if (o.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(o.seed);
    }
    if (o.trajectories > 0) {
        cfg.mode = fockgen::RunMode::trajectories;
        cfg.trajectories = static_cast<std::uint64_t>(o.trajectories);
    }
    if (o.truncation > 0) {
        const auto k = static_cast<std::size_t>(o.truncation);
        cfg.truncation = fockgen::Truncation{k, fockgen::is_two_mode(cfg.target) ? k : 1};
    }
    if (!o.out.empty()) {
        cfg.output = o.out;
    }
    return cfg;
}

int cmd_run(const std::string &path, const Overrides &o) {
    const auto cfg = load_config(path, o);
    if (cfg.output.empty()) {
        std::cout << fockgen::run(cfg, o.threads).csv;
    } else {
        const auto artifacts = fockgen::write_run(cfg, cfg.output, o.threads);
        std::cerr << "wrote " << cfg.output << "\n" << artifacts.summary.dump(2) << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string &path, const Overrides &o, const std::vector<int> &ls,
              const std::vector<int> &qs, const std::vector<int> &Ls) {
    const auto cfg = load_config(path, o);
    fockgen::SearchSpace space{ls, qs, Ls};
    fockgen::OptimizationResult result;
    if (fockgen::is_two_mode(cfg.target)) {
        fockgen::TwoModeParams before = std::get<fockgen::TwoModeParams>(cfg.params);
        fockgen::TwoModeParams after{before.g_b, before.g_a, before.delta};
        if (const auto *h = std::get_if<fockgen::TwoModeHybridStrategy>(&cfg.strategy.kind)) {
            before = h->before;
            after = h->after;
        }
        result = fockgen::optimize_schedule(cfg.target, before, after, cfg.strategy.cycles, space,
                                            cfg.resolved_truncation());
    } else {
        result = fockgen::optimize_schedule(cfg.target, std::get<fockgen::SystemParams>(cfg.params),
                                            cfg.strategy.cycles, space,
                                            cfg.resolved_truncation().dim_a);
    }
    std::string csv = "l,q,L,fidelity,success_prob\n";
    for (const auto &c : result.evaluated) {
        int l = 1, q = 0, L = -1;
        std::visit(
            [&](const auto &s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (!std::is_same_v<T, fockgen::UniformStrategy>) {
                    l = s.l;
                    q = s.q;
                }
                if constexpr (std::is_same_v<T, fockgen::TwoModeHybridStrategy>) {
                    L = s.L;
                }
            },
            c.strategy.kind);
        csv += std::to_string(l) + "," + std::to_string(q) + "," +
               (L < 0 ? std::string() : std::to_string(L)) + "," +
               fockgen::format_number(c.fidelity) + "," + fockgen::format_number(c.success) +
               "\n";
    }
    if (cfg.output.empty()) {
        std::cout << csv;
    } else {
        fockgen::detail::write_text(cfg.output, csv);
    }
    std::cerr << "best: " << fockgen::config_to_json(fockgen::RunConfig{
                                 cfg.target, result.best.strategy, cfg.params, cfg.truncation})
                                 .at("strategy")
                                 .dump()
              << " fidelity=" << fockgen::format_number(result.best.fidelity)
              << " success_prob=" << fockgen::format_number(result.best.success) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"fockgen: measurement-driven Fock-state and Bell-state generation from coherent "
                 "states"};
    app.footer(kUnits);
    app.require_subcommand(1);

    Overrides overrides;
    auto add_overrides = [&](CLI::App *cmd) {
        cmd->add_option("--seed", overrides.seed, "Master seed for trajectory mode");
        cmd->add_option("--trajectories", overrides.trajectories,
                        "Switch to trajectory mode with this many trajectories");
        cmd->add_option("--truncation", overrides.truncation, "Fock truncation per mode");
        cmd->add_option("--out", overrides.out, "Output CSV path (manifest is written next to it)");
        cmd->add_option("--threads", overrides.threads, "Trajectory worker threads (0 = auto)");
    };

    std::string config_path;
    auto *run = app.add_subcommand("run", "Run a JSON configuration");
    run->add_option("config", config_path, "Config file")->required();
    add_overrides(run);

    std::string preset_name;
    std::string preset_dir = ".";
    auto *preset = app.add_subcommand("preset", "Reproduce a figure preset");
    preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
    preset->add_option("--out", preset_dir, "Output directory");
    preset->add_option("--threads", overrides.threads, "Trajectory worker threads (0 = auto)");

    std::vector<int> ls{1, 2, 3};
    std::vector<int> qs{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> Ls;
    auto *sweep = app.add_subcommand("sweep", "Exhaustive schedule search over (l, q[, L])");
    sweep->add_option("config", config_path, "Config file (target, params, cycles)")->required();
    sweep->add_option("--l", ls, "Period multiples")->delimiter(',');
    sweep->add_option("--q", qs, "Short-period cycle counts")->delimiter(',');
    sweep->add_option("--L", Ls, "Coupling-switch cycles (Bell targets)")->delimiter(',');
    add_overrides(sweep);

    auto *list = app.add_subcommand("list-presets", "List figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(config_path, overrides);
        }
        if (*preset) {
            for (const auto &p : fockgen::run_preset(preset_name, preset_dir, overrides.threads)) {
                std::cout << p.string() << "\n";
            }
            return 0;
        }
        if (*sweep) {
            return cmd_sweep(config_path, overrides, ls, qs, Ls);
        }
        if (*list) {
            for (const auto &name : fockgen::list_presets()) {
                std::cout << name << "\n";
            }
            return 0;
        }
    } catch (const fockgen::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fockgen::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
