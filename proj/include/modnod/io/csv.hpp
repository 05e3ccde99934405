#pragma once

#include "modnod/continuation.hpp"
#include "modnod/dynamics.hpp"
#include "modnod/reduction.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <string>

namespace modnod::io {

/// Shortest decimal text that parses back to exactly `v`.
[[nodiscard]] inline std::string format_number(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

inline void write_state_columns(std::ostream& os, int n) {
    for (int i = 1; i <= n; ++i) os << ",x_" << i;
}

inline void write_state(std::ostream& os, const Vector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << format_number(x(i));
}

/// Columns: branch_label, point_index, u0, x_1..x_N, leading_jac_eig, stable,
/// event_kind. Event rows follow the point they were found after and leave
/// leading_jac_eig/stable empty.
inline void write_diagram_csv(std::ostream& os, const std::vector<Branch>& branches, int n) {
    os << "branch_label,point_index,u0";
    write_state_columns(os, n);
    os << ",leading_jac_eig,stable,event_kind\n";
    for (const auto& br : branches) {
        std::size_t next_event = 0;
        for (std::size_t i = 0; i < br.points.size(); ++i) {
            const auto& p = br.points[i];
            os << br.label << ',' << i << ',' << format_number(p.u0);
            write_state(os, p.x);
            os << ',' << format_number(p.leading_jac_eig) << ',' << (p.stable ? 1 : 0) << ",\n";
            for (; next_event < br.events.size() && br.events[next_event].after_point == i; ++next_event) {
                const auto& e = br.events[next_event];
                os << br.label << ',' << i << ',' << format_number(e.u0);
                write_state(os, e.x);
                os << ",,," << event_name(e) << '\n';
            }
        }
    }
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
    os << 't';
    write_state_columns(os, n);
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << format_number(traj.times[i]);
        write_state(os, traj.states[i]);
        os << '\n';
    }
}

inline void write_equilibrium_csv(std::ostream& os, const BranchPoint& p) {
    os << "u0";
    write_state_columns(os, static_cast<int>(p.x.size()));
    os << ",leading_jac_eig,stable\n" << format_number(p.u0);
    write_state(os, p.x);
    os << ',' << format_number(p.leading_jac_eig) << ',' << (p.stable ? 1 : 0) << '\n';
}

inline void write_reduce_csv(std::ostream& os, double u0_star, const LSReport& r) {
    os << "u0_star,g,g_v,g_u0,g_vv,g_vu0,g_vvv,classification,h_v,h_u,v_max_entry,v_norm\n";
    os << format_number(u0_star) << ',' << format_number(r.g) << ',' << format_number(r.g_v) << ','
       << format_number(r.g_u0) << ',' << format_number(r.g_vv) << ',' << format_number(r.g_vu0) << ','
       << format_number(r.g_vvv) << ',' << to_string(r.classification) << ',' << format_number(r.h_v)
       << ',' << format_number(r.h_u) << ',' << format_number(r.v_max_entry) << ','
       << format_number(r.v_norm) << '\n';
}

}  // namespace modnod::io
