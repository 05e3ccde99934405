#pragma once

#include "modnod/continuation.hpp"
#include "modnod/dynamics.hpp"
#include "modnod/errors.hpp"
#include "modnod/io/config.hpp"
#include "modnod/io/csv.hpp"
#include "modnod/io/svg.hpp"
#include "modnod/reduction.hpp"
#include "modnod/scenarios.hpp"
#include "modnod/spectral.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace modnod::io {

enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitConfig = 2 };

struct OutputOptions {
    std::filesystem::path out_dir = ".";
    bool svg = true;
    bool quiet = false;
    std::optional<std::uint64_t> seed;  ///< overrides the config's seed
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"simulate", "equilibrium", "diagram", "reduce", "analyze"};
    return names;
}

namespace detail {

inline std::string g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string vec_text(const Vector& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v(i));
        s += (i ? ", " : "") + std::string(buf);
    }
    return s + "]";
}

/// Small random guess, reproducible from the seed.
inline Vector seeded_guess(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1e-2, 1e-2);
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = dist(rng);
    return x;
}

inline Normalization normalization_for(const RunConfig& cfg) {
    if (cfg.params.normalization) return *cfg.params.normalization;
    if (cfg.scenario && std::holds_alternative<InfluencerRing>(*cfg.scenario)) return Normalization::UnitMaxEntry;
    return Normalization::UnitNorm;
}

inline std::pair<double, double> default_range(const RunConfig& cfg) {
    if (cfg.params.u0_range) return *cfg.params.u0_range;
    try {
        return {0.0, 2.0 * critical_attention(cfg.spec)};
    } catch (const Error&) {
        return {0.0, 2.0};
    }
}

inline double require_u0(const RunConfig& cfg) {
    if (!cfg.params.u0) throw ValidationError("params.u0: required for this command");
    return *cfg.params.u0;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

inline Projection make_projection(const RunConfig& cfg, std::string& label) {
    const auto& proj = cfg.params.projection;
    if (proj == "vmax") {
        try {
            const Vector v = leading_eigenpair(cfg.spec).v_max;
            label = "<x, v_max>";
            return [v](const Vector& x) { return x.dot(v); };
        } catch (const Error&) {
            label = "x_1";
            return [](const Vector& x) { return x(0); };
        }
    }
    if (proj.size() > 1 && proj[0] == 'x') {
        int k = 0;
        try {
            k = std::stoi(proj.substr(1));
        } catch (const std::exception&) {
        }
        if (k >= 1 && k <= cfg.spec.size()) {
            label = "x_" + std::to_string(k);
            return [k](const Vector& x) { return x(k - 1); };
        }
    }
    throw ValidationError("params.projection: expected \"vmax\" or \"x<k>\" with 1 <= k <= N");
}

}  // namespace detail

/// Runs one subcommand; every output file is written after the computation
/// succeeds. Returns the process exit code.
inline int run_command(const std::string& command, const RunConfig& cfg, const OutputOptions& opt,
                       std::ostream& out, std::ostream& err) {
    using namespace detail;
    std::map<std::string, std::string> files;
    std::string summary;
    const std::uint64_t seed = opt.seed.value_or(cfg.seed);
    const int n = cfg.spec.size();

    try {
        if (!cfg.command.empty() && cfg.command != command)
            throw ValidationError("command: config says '" + cfg.command + "' but '" + command + "' was requested");
        files["spec.json"] = spec_to_json(cfg.spec).dump(2) + "\n";

        if (command == "analyze") {
            const auto eig = leading_eigenpair(cfg.spec);
            const double u_star = critical_attention(cfg.spec);
            Json j;
            j["lambda_max"] = eig.lambda_max;
            j["u0_star"] = u_star;
            j["spectral_gap"] = eig.spectral_gap;
            j["v_max"] = std::vector<double>(eig.v_max.data(), eig.v_max.data() + n);
            j["w_max"] = std::vector<double>(eig.w_max.data(), eig.w_max.data() + n);
            Json spectrum = Json::array();
            for (const auto& l : full_spectrum(cfg.spec.A)) spectrum.push_back({l.real(), l.imag()});
            j["spectrum"] = spectrum;
            files["analyze.json"] = j.dump(2) + "\n";
            summary = "u0* = " + g10(u_star) + ", λmax = " + g10(eig.lambda_max) +
                      ", spectral_gap = " + g10(eig.spectral_gap) + ", v_max = " + vec_text(eig.v_max) +
                      ", w_max = " + vec_text(eig.w_max);
        } else if (command == "reduce") {
            auto eig = leading_eigenpair(cfg.spec);
            const double u_star = critical_attention(cfg.spec);
            if (normalization_for(cfg) == Normalization::UnitMaxEntry) eig = with_unit_max_entry(eig);
            const auto report = ls_derivatives(cfg.spec, eig);
            std::ostringstream csv;
            write_reduce_csv(csv, u_star, report);
            files["reduce.csv"] = csv.str();
            summary = "u0* = " + g10(u_star) + ", λmax = " + g10(eig.lambda_max) +
                      ", classification = " + std::string(to_string(report.classification)) +
                      ", g_vu0 = " + g10(report.g_vu0) + ", g_vv = " + g10(report.g_vv) +
                      ", g_vvv = " + g10(report.g_vvv);
        } else if (command == "simulate") {
            const double u0 = require_u0(cfg);
            const Vector x0 = cfg.params.x0.value_or(seeded_guess(n, seed));
            const auto traj = integrate(cfg.spec, x0, u0, cfg.params.t_end, cfg.params.dt);
            std::ostringstream csv;
            write_trajectory_csv(csv, traj);
            files["trajectory.csv"] = csv.str();
            summary = "simulate: u0 = " + g10(u0) + ", t_end = " + g10(cfg.params.t_end) +
                      ", x(t_end) = " + vec_text(traj.states.back());
        } else if (command == "equilibrium") {
            const double u0 = require_u0(cfg);
            Vector guess;
            if (cfg.params.x0) {
                guess = *cfg.params.x0;
            } else {
                SettleOptions so;
                so.throw_if_unsettled = false;
                so.t_max = 1e3;
                guess = settle(cfg.spec, seeded_guess(n, seed), u0, so).state;
            }
            const Vector x = newton_equilibrium(cfg.spec, guess, u0);
            const auto p = branch_point_at(cfg.spec, x, u0);
            std::ostringstream csv;
            write_equilibrium_csv(csv, p);
            files["equilibrium.csv"] = csv.str();
            summary = "equilibrium: u0 = " + g10(u0) + ", x = " + vec_text(x) +
                      ", leading_jac_eig = " + g10(p.leading_jac_eig) + ", stable = " + (p.stable ? "yes" : "no");
        } else if (command == "diagram") {
            const auto [lo, hi] = default_range(cfg);
            DiagramOptions dopt;
            dopt.step = cfg.params.step;
            dopt.max_depth = cfg.params.max_depth;
            dopt.events.normalization = normalization_for(cfg);
            if (cfg.scenario && std::holds_alternative<DriveSteer>(*cfg.scenario)) dopt.labeler = drive_steer_label;
            std::string y_label;
            const auto project = make_projection(cfg, y_label);
            const auto result = diagram(cfg.spec, lo, hi, dopt);
            for (const auto& e : result.errors) err << "warning: " << e << '\n';
            if (result.branches.empty()) throw NoBranchFound("no branch could be traced");
            std::ostringstream csv;
            write_diagram_csv(csv, result.branches, n);
            files["diagram.csv"] = csv.str();
            if (opt.svg) {
                std::ostringstream svg;
                SvgOptions so;
                so.y_label = y_label;
                write_diagram_svg(svg, result.branches, lo, hi, project, so);
                files["diagram.svg"] = svg.str();
            }
            summary = "diagram: " + std::to_string(result.branches.size()) + " branches over [" + g10(lo) +
                      ", " + g10(hi) + "]";
            std::string ev;
            for (const auto& br : result.branches)
                for (const auto& e : br.events)
                    ev += (ev.empty() ? "" : ", ") + br.label + ":" + event_name(e) + "@" + g10(e.u0);
            if (!ev.empty()) summary += ", events: " + ev;
        } else {
            throw ValidationError("command: unknown command '" + command + "'");
        }

        std::filesystem::create_directories(opt.out_dir);
        for (const auto& [name, content] : files) write_file(opt.out_dir / name, content);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (!opt.quiet) out << summary << '\n';
    return kExitOk;
}

/// Text for `scenario list`.
inline std::string scenario_list() {
    return "two_node         m_strength=1 n=1          two mutually inhibiting nodes, node 1 modulates 1->2\n"
           "influencer_ring  m_bar=0                   five-node ring, node 1 modulates every link\n"
           "drive_steer      alpha=1 beta=0.3 m_bar=0  drive/stay block modulating a steer left/right block\n";
}

}  // namespace modnod::io
