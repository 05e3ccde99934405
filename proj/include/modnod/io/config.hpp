#pragma once

#include "modnod/continuation.hpp"
#include "modnod/errors.hpp"
#include "modnod/network.hpp"
#include "modnod/scenarios.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace modnod::io {

using Json = nlohmann::json;

/// Per-command parameters; every field is optional in the document.
struct Params {
    std::optional<double> u0;
    std::optional<std::pair<double, double>> u0_range;
    std::optional<Vector> x0;
    double t_end = 50.0;
    double dt = 0.01;
    StepParams step{};
    int max_depth = 2;
    /// "vmax" (projection on the leading right eigenvector) or "x<k>" (1-based component).
    std::string projection = "vmax";
    std::optional<Normalization> normalization;
};

struct RunConfig {
    NetworkSpec spec;
    std::optional<ScenarioId> scenario;
    std::string command;
    Params params;
    std::uint64_t seed = 0;
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

inline double get_number(const Json& j, const std::string& path) {
    if (!j.is_number()) invalid(path, "expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

inline int get_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == std::floor(j.get<double>())))
        invalid(path, "expected an integer");
    return static_cast<int>(j.get<double>());
}

inline Vector get_vector(const Json& j, const std::string& path) {
    if (!j.is_array()) invalid(path, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = get_number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

inline Matrix get_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) invalid(path, "expected a non-empty array of rows");
    const auto rows = j.size();
    if (!j[0].is_array()) invalid(path + "[0]", "expected an array of numbers");
    const auto cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto rp = path + "[" + std::to_string(r) + "]";
        Vector row = get_vector(j[r], rp);
        if (static_cast<std::size_t>(row.size()) != cols)
            invalid(rp, "expected " + std::to_string(cols) + " columns, got " + std::to_string(row.size()));
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

inline void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) invalid(path + "." + key, "unknown key");
    }
}

inline Saturation get_saturation(const Json& j, const std::string& path) {
    if (j.is_string()) {
        if (j == "odd") return Saturation::odd();
        invalid(path, "expected \"odd\" or an object {\"kind\": \"shifted\", \"s\": ...}");
    }
    if (!j.is_object()) invalid(path, "expected a string or object");
    check_keys(j, path, {"kind", "s"});
    const auto kind = j.value("kind", std::string("odd"));
    if (kind == "odd") return Saturation::odd();
    if (kind == "shifted") {
        if (!j.contains("s")) invalid(path + ".s", "required for the shifted saturation");
        return Saturation::shifted(get_number(j["s"], path + ".s"));
    }
    invalid(path + ".kind", "unknown saturation kind '" + kind + "'");
}

/// Keys shared by inline models and scenario overrides.
inline void apply_common(const Json& j, const std::string& path, NetworkSpec& spec) {
    if (j.contains("saturation")) spec.saturation = get_saturation(j["saturation"], path + ".saturation");
    if (j.contains("b")) spec.b = get_vector(j["b"], path + ".b");
    if (j.contains("tau")) spec.tau = get_number(j["tau"], path + ".tau");
}

inline NetworkSpec parse_model(const Json& j) {
    const std::string path = "model";
    if (!j.is_object()) invalid(path, "expected an object");
    check_keys(j, path, {"N", "A", "M", "n", "saturation", "b", "tau"});
    if (!j.contains("A")) invalid(path + ".A", "required");
    NetworkSpec spec;
    spec.A = get_matrix(j["A"], path + ".A");
    const auto N = spec.A.rows();
    if (spec.A.cols() != N)
        invalid(path + ".A", "expected a square matrix, got " + std::to_string(N) + "x" +
                                 std::to_string(spec.A.cols()));
    if (j.contains("N") && get_int(j["N"], path + ".N") != N)
        invalid(path + ".N", "does not match the size of A (" + std::to_string(N) + ")");
    spec.b = Vector::Zero(N);
    if (j.contains("n")) spec.order = get_int(j["n"], path + ".n");
    if (j.contains("M")) {
        const auto& m = j["M"];
        if (!m.is_array()) invalid(path + ".M", "expected a list of [i, j, k, weight]");
        for (std::size_t e = 0; e < m.size(); ++e) {
            const auto ep = path + ".M[" + std::to_string(e) + "]";
            if (!m[e].is_array() || m[e].size() != 4) invalid(ep, "expected [i, j, k, weight]");
            Modulation mod;
            mod.i = get_int(m[e][0], ep + "[0]") - 1;
            mod.j = get_int(m[e][1], ep + "[1]") - 1;
            mod.k = get_int(m[e][2], ep + "[2]") - 1;
            mod.weight = get_number(m[e][3], ep + "[3]");
            spec.M.push_back(mod);
        }
    }
    apply_common(j, path, spec);
    try {
        validate(spec);
    } catch (const ValidationError& e) {
        throw ValidationError(path + "." + e.what());
    }
    return spec;
}

inline ScenarioId parse_scenario(const Json& j) {
    const std::string path = "scenario";
    if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
        invalid(path + ".name", "required (two_node | influencer_ring | drive_steer)");
    const auto name = j["name"].get<std::string>();
    const auto num = [&](const char* key, double fallback) {
        return j.contains(key) ? get_number(j[key], path + "." + key) : fallback;
    };
    if (name == "two_node") {
        check_keys(j, path, {"name", "m_strength", "n", "saturation", "b", "tau"});
        TwoNode s{num("m_strength", 1.0), j.contains("n") ? get_int(j["n"], path + ".n") : 1};
        if (s.n < 1) invalid(path + ".n", "modulation order must be >= 1");
        return s;
    }
    if (name == "influencer_ring") {
        check_keys(j, path, {"name", "m_bar", "saturation", "b", "tau"});
        InfluencerRing s{num("m_bar", 0.0)};
        if (!(s.m_bar >= 0.0)) invalid(path + ".m_bar", "must be >= 0");
        return s;
    }
    if (name == "drive_steer") {
        check_keys(j, path, {"name", "alpha", "beta", "m_bar", "saturation", "b", "tau"});
        DriveSteer s{num("alpha", 1.0), num("beta", 0.3), num("m_bar", 0.0)};
        if (!(s.alpha > 0.0)) invalid(path + ".alpha", "must be positive");
        if (!(s.beta > 0.0)) invalid(path + ".beta", "must be positive");
        return s;
    }
    invalid(path + ".name", "unknown scenario '" + name + "'");
}

inline Params parse_params(const Json& j) {
    const std::string path = "params";
    Params p;
    if (!j.is_object()) invalid(path, "expected an object");
    check_keys(j, path, {"u0", "u0_range", "x0", "t_end", "dt", "step", "max_depth", "projection",
                         "normalization"});
    if (j.contains("u0")) p.u0 = get_number(j["u0"], path + ".u0");
    if (j.contains("u0_range")) {
        const Vector r = get_vector(j["u0_range"], path + ".u0_range");
        if (r.size() != 2 || !(r(0) < r(1))) invalid(path + ".u0_range", "expected [lo, hi] with lo < hi");
        p.u0_range = std::pair{r(0), r(1)};
    }
    if (j.contains("x0")) p.x0 = get_vector(j["x0"], path + ".x0");
    if (j.contains("t_end")) p.t_end = get_number(j["t_end"], path + ".t_end");
    if (j.contains("dt")) p.dt = get_number(j["dt"], path + ".dt");
    if (!(p.t_end > 0.0)) invalid(path + ".t_end", "must be positive");
    if (!(p.dt > 0.0)) invalid(path + ".dt", "must be positive");
    if (j.contains("step")) {
        const auto& s = j["step"];
        const auto sp = path + ".step";
        if (!s.is_object()) invalid(sp, "expected an object");
        check_keys(s, sp, {"initial", "min", "max", "max_points"});
        if (s.contains("initial")) p.step.initial = get_number(s["initial"], sp + ".initial");
        if (s.contains("min")) p.step.min = get_number(s["min"], sp + ".min");
        if (s.contains("max")) p.step.max = get_number(s["max"], sp + ".max");
        if (s.contains("max_points")) {
            const int mp = get_int(s["max_points"], sp + ".max_points");
            if (mp < 2) invalid(sp + ".max_points", "must be >= 2");
            p.step.max_points = static_cast<std::size_t>(mp);
        }
        if (!(p.step.min > 0.0) || !(p.step.min <= p.step.max))
            invalid(sp, "expected 0 < min <= max");
    }
    if (j.contains("max_depth")) p.max_depth = get_int(j["max_depth"], path + ".max_depth");
    if (j.contains("projection")) {
        if (!j["projection"].is_string()) invalid(path + ".projection", "expected a string");
        p.projection = j["projection"].get<std::string>();
    }
    if (j.contains("normalization")) {
        const auto v = j["normalization"].is_string() ? j["normalization"].get<std::string>() : "";
        if (v == "unit_norm") p.normalization = Normalization::UnitNorm;
        else if (v == "unit_max_entry") p.normalization = Normalization::UnitMaxEntry;
        else invalid(path + ".normalization", "expected \"unit_norm\" or \"unit_max_entry\"");
    }
    return p;
}

}  // namespace detail

/// Parses and validates a run configuration document.
[[nodiscard]] inline RunConfig parse_config_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("top level must be a JSON object");
    detail::check_keys(doc, "$", {"model", "scenario", "command", "params", "seed"});

    RunConfig cfg;
    const bool has_model = doc.contains("model");
    const bool has_scenario = doc.contains("scenario");
    if (has_model == has_scenario) throw ValidationError("$: exactly one of 'model' or 'scenario' is required");
    if (has_model) {
        cfg.spec = detail::parse_model(doc["model"]);
    } else {
        cfg.scenario = detail::parse_scenario(doc["scenario"]);
        cfg.spec = build(*cfg.scenario);
        detail::apply_common(doc["scenario"], "scenario", cfg.spec);
        try {
            validate(cfg.spec);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("scenario.") + e.what());
        }
    }
    if (doc.contains("command")) {
        if (!doc["command"].is_string()) detail::invalid("command", "expected a string");
        cfg.command = doc["command"].get<std::string>();
    }
    if (doc.contains("params")) cfg.params = detail::parse_params(doc["params"]);
    if (cfg.params.x0 && cfg.params.x0->size() != cfg.spec.size())
        detail::invalid("params.x0", "expected length " + std::to_string(cfg.spec.size()));
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0)
            detail::invalid("seed", "expected a non-negative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    return cfg;
}

/// Reads from `path`, or from stdin when path is "-".
[[nodiscard]] inline RunConfig parse_config(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open config file '" + path + "'");
        buf << in.rdbuf();
    }
    return parse_config_text(buf.str());
}

/// Inline-model JSON for a spec; parse_model(spec_to_json(s)) == s.
[[nodiscard]] inline Json spec_to_json(const NetworkSpec& spec) {
    Json j;
    j["N"] = spec.size();
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < spec.A.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < spec.A.cols(); ++c) row.push_back(spec.A(r, c));
        rows.push_back(row);
    }
    j["A"] = rows;
    Json m = Json::array();
    for (const auto& e : spec.M) m.push_back({e.i + 1, e.j + 1, e.k + 1, e.weight});
    j["M"] = m;
    j["n"] = spec.order;
    if (spec.saturation.kind == Saturation::Kind::Odd)
        j["saturation"] = {{"kind", "odd"}};
    else
        j["saturation"] = {{"kind", "shifted"}, {"s", spec.saturation.shift}};
    j["b"] = std::vector<double>(spec.b.data(), spec.b.data() + spec.b.size());
    j["tau"] = spec.tau;
    return j;
}

[[nodiscard]] inline NetworkSpec spec_from_json(const Json& j) { return detail::parse_model(j); }

}  // namespace modnod::io
