#pragma once

#include "modnod/errors.hpp"
#include "modnod/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace modnod {

/// Sampled solution of the opinion dynamics; times are in units of the
/// spec's time variable (tau scales the right-hand side, not the clock).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    double u0 = 0.0;
};

inline constexpr double kDivergenceBound = 1e6;

namespace detail {

inline Vector rk4_step(const NetworkSpec& spec, const Vector& x, double u0, double dt) {
    const Vector k1 = vector_field(spec, x, u0);
    const Vector k2 = vector_field(spec, x + 0.5 * dt * k1, u0);
    const Vector k3 = vector_field(spec, x + 0.5 * dt * k2, u0);
    const Vector k4 = vector_field(spec, x + dt * k3, u0);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_state(const Vector& x, double t) {
    if (!x.allFinite()) throw NonFinite("state became non-finite at t = " + std::to_string(t));
    if (x.norm() > kDivergenceBound)
        throw Diverged("state norm exceeded " + std::to_string(kDivergenceBound) +
                       " at t = " + std::to_string(t));
}

}  // namespace detail

/// Classical fixed-step RK4 from t = 0 to t_end. The last step is shortened
/// so the final sample lands exactly on t_end.
[[nodiscard]] inline Trajectory integrate(const NetworkSpec& spec, const Vector& x0, double u0,
                                          double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("integrate: dt and t_end must be positive");
    if (x0.size() != spec.size()) throw std::invalid_argument("integrate: x0 has wrong dimension");
    detail::check_state(x0, 0.0);

    Trajectory traj;
    traj.u0 = u0;
    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Vector x = x0;
    for (long s = 1; s <= steps; ++s) {
        const double t_prev = traj.times.back();
        const double t = (s == steps) ? t_end : static_cast<double>(s) * dt;
        x = detail::rk4_step(spec, x, u0, t - t_prev);
        detail::check_state(x, t);
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

struct SettleResult {
    Vector state;
    double time = 0.0;
    double residual = 0.0;  ///< |vector_field| at `state`
    bool converged = false;
};

struct SettleOptions {
    double tol = 1e-9;
    double t_max = 1e4;
    double dt = 0.01;
    bool throw_if_unsettled = true;
};

/// Integrates until |x'| < tol. Near a bifurcation convergence is only
/// algebraic, so hitting t_max there is expected; that raises NotSettled
/// unless `throw_if_unsettled` is off.
[[nodiscard]] inline SettleResult settle(const NetworkSpec& spec, const Vector& x0, double u0,
                                         const SettleOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("settle: tol must be positive");
    if (x0.size() != spec.size()) throw std::invalid_argument("settle: x0 has wrong dimension");
    detail::check_state(x0, 0.0);
    const double dt = opt.dt * spec.tau;

    SettleResult r;
    r.state = x0;
    r.residual = vector_field(spec, x0, u0).norm();
    while (r.residual >= opt.tol && r.time < opt.t_max) {
        const double h = std::min(dt, opt.t_max - r.time);
        r.state = detail::rk4_step(spec, r.state, u0, h);
        r.time += h;
        detail::check_state(r.state, r.time);
        r.residual = vector_field(spec, r.state, u0).norm();
    }
    r.converged = r.residual < opt.tol;
    if (!r.converged && opt.throw_if_unsettled)
        throw NotSettled("residual " + std::to_string(r.residual) + " after t = " +
                         std::to_string(r.time));
    return r;
}

}  // namespace modnod
