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
 * Run configuration and its JSON form.
 *
 * {
 *   "target":    {"fock": 5}
 *              | {"superposed": {"n": 5, "c0": 0.707.., "cn": 0.707.., "sign": 1}}
 *              | {"bell": {"m": 4, "n": 4, "c00": 0.707.., "cmn": 0.707.., "sign": 1}},
 *   "strategy":  {"kind": "uniform"}
 *              | {"kind": "hybrid", "l": 3, "q": 5}
 *              | {"kind": "hybrid_two_mode", "l": 3, "q": 5, "L": 15,
 *                 "before": {"g_a": 0.05, "g_b": 0.03, "delta": 0},
 *                 "after":  {"g_a": 0.03, "g_b": 0.05, "delta": 0}},
 *   "params":    {"g": 0.05, "delta": 0}              (single mode)
 *              | {"g_a": 0.05, "g_b": 0.03, "delta": 0} (Bell targets),
 *   "cycles":    20,
 *   "truncation": "auto" | K | [K_a, K_b],
 *   "mode":      "postselected" | "closed_form" | "trajectories",
 *   "trajectories": 1000, "seed": 1, "max_restarts": 1000000,
 *   "output":    "run.csv"
 * }
 *
 * Only "target" is required. Unknown keys are rejected.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "json.hpp"

#include "fockgen/errors.hpp"
#include "fockgen/jc_kernel.hpp"
#include "fockgen/schedule.hpp"

namespace fockgen {

enum class RunMode { postselected, closed_form, trajectories };

inline std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::postselected:
        return "postselected";
    case RunMode::closed_form:
        return "closed_form";
    case RunMode::trajectories:
        return "trajectories";
    }
    return "postselected";
}

using ModelParams = std::variant<SystemParams, TwoModeParams>;

struct RunConfig {
    TargetSpec target = FockTarget{5};
    StrategySpec strategy{UniformStrategy{}, 20};
    ModelParams params = SystemParams{};
    /// nullopt: pick from the initial amplitude.
    std::optional<Truncation> truncation;
    RunMode mode = RunMode::postselected;
    std::uint64_t trajectories = 1000;
    std::uint64_t seed = 1;
    std::uint64_t max_restarts = 1'000'000;
    std::string output;

    Truncation resolved_truncation() const {
        return truncation.value_or(default_truncation(target));
    }

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

namespace detail {

using nlohmann::json;

class ObjectReader {
  public:
    ObjectReader(const json &node, std::string path, std::set<std::string> allowed)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw SchemaError(path_, "expected an object");
        }
        for (const auto &[key, value] : node_.items()) {
            if (!allowed.contains(key)) {
                throw SchemaError(path_ + "." + key, "unknown key");
            }
        }
    }

    bool has(const std::string &key) const { return node_.contains(key); }
    const json &at(const std::string &key) const { return node_.at(key); }
    std::string path(const std::string &key) const { return path_ + "." + key; }

    double number(const std::string &key, double fallback) const {
        if (!has(key)) {
            return fallback;
        }
        const auto &v = node_.at(key);
        if (!v.is_number()) {
            throw SchemaError(path(key), "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw SchemaError(path(key), "must be finite");
        }
        return d;
    }

    std::int64_t integer(const std::string &key, std::int64_t fallback) const {
        if (!has(key)) {
            return fallback;
        }
        return as_integer(node_.at(key), path(key));
    }

    static std::int64_t as_integer(const json &v, const std::string &where) {
        if (!v.is_number_integer()) {
            throw SchemaError(where, "expected an integer");
        }
        return v.get<std::int64_t>();
    }

  private:
    const json &node_;
    std::string path_;
};

inline std::size_t nonnegative_index(std::int64_t v, const std::string &where) {
    if (v < 0) {
        throw SchemaError(where, "must be >= 0");
    }
    return static_cast<std::size_t>(v);
}

inline int sign_value(std::int64_t v, const std::string &where) {
    if (v != 1 && v != -1) {
        throw SchemaError(where, "sign must be 1 or -1");
    }
    return static_cast<int>(v);
}

inline TargetSpec parse_target(const json &node, const std::string &path) {
    ObjectReader r(node, path, {"fock", "superposed", "bell"});
    if (node.size() != 1) {
        throw SchemaError(path, "exactly one of fock / superposed / bell is required");
    }
    if (r.has("fock")) {
        return FockTarget{nonnegative_index(ObjectReader::as_integer(r.at("fock"), r.path("fock")),
                                            r.path("fock"))};
    }
    if (r.has("superposed")) {
        const std::string p = r.path("superposed");
        ObjectReader s(r.at("superposed"), p, {"n", "c0", "cn", "sign"});
        if (!s.has("n")) {
            throw SchemaError(p + ".n", "required");
        }
        SuperposedTarget t;
        t.n = nonnegative_index(s.integer("n", 1), s.path("n"));
        t.c0 = s.number("c0", t.c0);
        t.cn = s.number("cn", t.cn);
        t.sign = sign_value(s.integer("sign", 1), s.path("sign"));
        return t;
    }
    const std::string p = r.path("bell");
    ObjectReader b(r.at("bell"), p, {"m", "n", "c00", "cmn", "sign"});
    if (!b.has("n")) {
        throw SchemaError(p + ".n", "required");
    }
    BellTarget t;
    t.n = nonnegative_index(b.integer("n", 1), b.path("n"));
    t.m = nonnegative_index(b.integer("m", static_cast<std::int64_t>(t.n)), b.path("m"));
    t.c00 = b.number("c00", t.c00);
    t.cmn = b.number("cmn", t.cmn);
    t.sign = sign_value(b.integer("sign", 1), b.path("sign"));
    return t;
}

inline TwoModeParams parse_two_mode_params(const json &node, const std::string &path,
                                           TwoModeParams fallback) {
    ObjectReader r(node, path, {"g_a", "g_b", "delta"});
    TwoModeParams p{r.number("g_a", fallback.g_a), r.number("g_b", fallback.g_b),
                    r.number("delta", fallback.delta)};
    try {
        p.validate();
    } catch (const ValueError &e) {
        throw SchemaError(path, e.what());
    }
    return p;
}

inline SystemParams parse_system_params(const json &node, const std::string &path) {
    ObjectReader r(node, path, {"g", "delta"});
    SystemParams p{r.number("g", 0.05), r.number("delta", 0.0)};
    try {
        p.validate();
    } catch (const ValueError &e) {
        throw SchemaError(path, e.what());
    }
    return p;
}

inline json to_json(const TwoModeParams &p) {
    return json{{"g_a", p.g_a}, {"g_b", p.g_b}, {"delta", p.delta}};
}

} // namespace detail

/// Parse and validate a JSON config. Throws SchemaError with a field path.
inline RunConfig parse_config(const std::string &text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    detail::ObjectReader root(doc, "$",
                              {"target", "strategy", "params", "cycles", "truncation", "mode",
                               "trajectories", "seed", "max_restarts", "output"});
    RunConfig cfg;
    if (!root.has("target")) {
        throw SchemaError("$.target", "required");
    }
    cfg.target = detail::parse_target(root.at("target"), "$.target");
    try {
        validate(cfg.target);
    } catch (const ValueError &e) {
        throw SchemaError("$.target", e.what());
    }
    const bool two_mode = is_two_mode(cfg.target);

    if (two_mode) {
        cfg.params = root.has("params")
                         ? detail::parse_two_mode_params(root.at("params"), "$.params",
                                                         TwoModeParams{})
                         : TwoModeParams{};
    } else {
        cfg.params = root.has("params") ? detail::parse_system_params(root.at("params"), "$.params")
                                        : SystemParams{};
    }

    const std::int64_t cycles = root.integer("cycles", 20);
    if (cycles < 1) {
        throw SchemaError("$.cycles", "must be >= 1");
    }
    cfg.strategy.cycles = static_cast<int>(cycles);

    if (root.has("strategy")) {
        const std::string p = "$.strategy";
        const json &node = root.at("strategy");
        if (!node.is_object() || !node.contains("kind") || !node.at("kind").is_string()) {
            throw SchemaError(p + ".kind", "required string");
        }
        const auto kind = node.at("kind").get<std::string>();
        if (kind == "uniform") {
            detail::ObjectReader(node, p, {"kind"});
            cfg.strategy.kind = UniformStrategy{};
        } else if (kind == "hybrid") {
            detail::ObjectReader s(node, p, {"kind", "l", "q"});
            cfg.strategy.kind = HybridStrategy{static_cast<int>(s.integer("l", 3)),
                                               static_cast<int>(s.integer("q", 5))};
        } else if (kind == "hybrid_two_mode") {
            if (!two_mode) {
                throw SchemaError(p + ".kind", "hybrid_two_mode needs a bell target");
            }
            detail::ObjectReader s(node, p, {"kind", "l", "q", "L", "before", "after"});
            TwoModeHybridStrategy h;
            h.l = static_cast<int>(s.integer("l", 3));
            h.q = static_cast<int>(s.integer("q", 5));
            h.L = static_cast<int>(s.integer("L", 15));
            const auto &base = std::get<TwoModeParams>(cfg.params);
            h.before = s.has("before")
                           ? detail::parse_two_mode_params(s.at("before"), p + ".before", base)
                           : base;
            const TwoModeParams swapped{h.before.g_b, h.before.g_a, h.before.delta};
            h.after = s.has("after")
                          ? detail::parse_two_mode_params(s.at("after"), p + ".after", swapped)
                          : swapped;
            cfg.strategy.kind = h;
        } else {
            throw SchemaError(p + ".kind", "unknown strategy '" + kind + "'");
        }
        std::visit(
            [&](const auto &s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (!std::is_same_v<T, UniformStrategy>) {
                    if (s.l < 1) {
                        throw SchemaError(p + ".l", "must be >= 1");
                    }
                    if (s.q < 0 || s.q > cfg.strategy.cycles) {
                        throw SchemaError(p + ".q", "must satisfy 0 <= q <= cycles");
                    }
                }
                if constexpr (std::is_same_v<T, TwoModeHybridStrategy>) {
                    if (s.L < s.q || s.L > cfg.strategy.cycles) {
                        throw SchemaError(p + ".L", "must satisfy q <= L <= cycles");
                    }
                }
            },
            cfg.strategy.kind);
    }

    if (root.has("truncation")) {
        const json &t = root.at("truncation");
        const std::string p = "$.truncation";
        auto dim = [&](const json &v, const std::string &where) {
            const auto k = detail::ObjectReader::as_integer(v, where);
            if (k < 1) {
                throw SchemaError(where, "must be >= 1");
            }
            return static_cast<std::size_t>(k);
        };
        if (t.is_string()) {
            if (t.get<std::string>() != "auto") {
                throw SchemaError(p, "expected \"auto\", an integer or [K_a, K_b]");
            }
        } else if (t.is_array()) {
            if (t.size() != 2 || !two_mode) {
                throw SchemaError(p, "[K_a, K_b] form is for bell targets");
            }
            cfg.truncation = Truncation{dim(t[0], p + "[0]"), dim(t[1], p + "[1]")};
        } else {
            const std::size_t k = dim(t, p);
            cfg.truncation = Truncation{k, two_mode ? k : 1};
        }
    }

    if (root.has("mode")) {
        const json &m = root.at("mode");
        const std::string s = m.is_string() ? m.get<std::string>() : "";
        if (s == "postselected") {
            cfg.mode = RunMode::postselected;
        } else if (s == "closed_form") {
            cfg.mode = RunMode::closed_form;
        } else if (s == "trajectories") {
            cfg.mode = RunMode::trajectories;
        } else {
            throw SchemaError("$.mode", "expected postselected, closed_form or trajectories");
        }
    }
    if (cfg.mode == RunMode::closed_form &&
        !std::holds_alternative<UniformStrategy>(cfg.strategy.kind)) {
        throw SchemaError("$.mode", "closed_form requires the uniform strategy");
    }

    auto positive = [&](const char *key, std::uint64_t fallback, std::int64_t min) {
        const auto v = root.integer(key, static_cast<std::int64_t>(fallback));
        if (v < min) {
            throw SchemaError(root.path(key), "must be >= " + std::to_string(min));
        }
        return static_cast<std::uint64_t>(v);
    };
    cfg.trajectories = positive("trajectories", cfg.trajectories, 1);
    cfg.seed = positive("seed", cfg.seed, 0);
    cfg.max_restarts = positive("max_restarts", cfg.max_restarts, 0);

    if (root.has("output")) {
        if (!root.at("output").is_string()) {
            throw SchemaError("$.output", "expected a string");
        }
        cfg.output = root.at("output").get<std::string>();
    }
    return cfg;
}

/// Canonical JSON with every field spelled out.
inline nlohmann::json config_to_json(const RunConfig &cfg) {
    using detail::json;
    json doc;
    std::visit(
        [&](const auto &t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, FockTarget>) {
                doc["target"] = json{{"fock", t.n}};
            } else if constexpr (std::is_same_v<T, SuperposedTarget>) {
                doc["target"] = json{
                    {"superposed", {{"n", t.n}, {"c0", t.c0}, {"cn", t.cn}, {"sign", t.sign}}}};
            } else {
                doc["target"] = json{{"bell",
                                      {{"m", t.m},
                                       {"n", t.n},
                                       {"c00", t.c00},
                                       {"cmn", t.cmn},
                                       {"sign", t.sign}}}};
            }
        },
        cfg.target);
    std::visit(
        [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UniformStrategy>) {
                doc["strategy"] = json{{"kind", "uniform"}};
            } else if constexpr (std::is_same_v<T, HybridStrategy>) {
                doc["strategy"] = json{{"kind", "hybrid"}, {"l", s.l}, {"q", s.q}};
            } else {
                doc["strategy"] = json{{"kind", "hybrid_two_mode"},
                                       {"l", s.l},
                                       {"q", s.q},
                                       {"L", s.L},
                                       {"before", detail::to_json(s.before)},
                                       {"after", detail::to_json(s.after)}};
            }
        },
        cfg.strategy.kind);
    if (const auto *p = std::get_if<SystemParams>(&cfg.params)) {
        doc["params"] = json{{"g", p->g}, {"delta", p->delta}};
    } else {
        doc["params"] = detail::to_json(std::get<TwoModeParams>(cfg.params));
    }
    doc["cycles"] = cfg.strategy.cycles;
    if (cfg.truncation) {
        if (is_two_mode(cfg.target)) {
            doc["truncation"] = json::array({cfg.truncation->dim_a, cfg.truncation->dim_b});
        } else {
            doc["truncation"] = cfg.truncation->dim_a;
        }
    } else {
        doc["truncation"] = "auto";
    }
    doc["mode"] = to_string(cfg.mode);
    doc["trajectories"] = cfg.trajectories;
    doc["seed"] = cfg.seed;
    doc["max_restarts"] = cfg.max_restarts;
    if (!cfg.output.empty()) {
        doc["output"] = cfg.output;
    }
    return doc;
}

inline std::string serialize_config(const RunConfig &cfg) { return config_to_json(cfg).dump(2); }

} // namespace fockgen
