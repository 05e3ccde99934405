#pragma once

#include "modnod/errors.hpp"
#include "modnod/model.hpp"
#include "modnod/reduction.hpp"
#include "modnod/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modnod {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// One equilibrium on a traced branch. `tangent` lives in (x, u0) space with
/// u0 as the last coordinate.
struct BranchPoint {
    double u0 = 0.0;
    Vector x;
    double leading_jac_eig = 0.0;
    bool stable = false;
    Vector tangent;
};

enum class EventKind { Pitchfork, Transcritical, SaddleNode, Unclassified };

[[nodiscard]] inline std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::Pitchfork: return "Pitchfork";
        case EventKind::Transcritical: return "Transcritical";
        case EventKind::SaddleNode: return "SaddleNode";
        case EventKind::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

struct BifurcationEvent {
    EventKind kind = EventKind::Unclassified;
    double u0 = 0.0;
    Vector x;
    std::optional<LSReport> detail;
    Vector critical_vector;  ///< unit right null vector of the Jacobian
    Vector tangent;          ///< branch tangent at the event
    int multiplicity = 1;    ///< number of real eigenvalues crossing together
    std::size_t after_point = 0;
};

/// Event name with the pitchfork direction resolved when a reduction is attached.
[[nodiscard]] inline std::string event_name(const BifurcationEvent& e) {
    if (e.kind == EventKind::Pitchfork && e.detail) return std::string(to_string(e.detail->classification));
    return std::string(to_string(e.kind));
}

struct Branch {
    std::vector<BranchPoint> points;
    std::vector<BifurcationEvent> events;
    std::string label;
    int depth = 0;
    std::string stop_reason;
};

struct StepParams {
    double initial = 0.01;
    double min = 1e-5;
    double max = 0.1;
    double grow = 1.3;
    int fast_iterations = 3;
    std::size_t max_points = 2000;
};

inline constexpr double kEquilibriumTol = 1e-12;
inline constexpr double kZeroEigenvalueTol = 1e-8;

// ---------------------------------------------------------------------------
// Newton equilibrium solve
// ---------------------------------------------------------------------------

struct NewtonOptions {
    double tol = kEquilibriumTol;  ///< on |vector_field|_inf
    int max_iterations = 50;
};

/// Damped Newton for vector_field(x, u0) = 0 with the analytic Jacobian.
[[nodiscard]] inline Vector newton_equilibrium(const NetworkSpec& spec, const Vector& x_guess,
                                               double u0, const NewtonOptions& opt = {}) {
    if (!x_guess.allFinite()) throw std::invalid_argument("newton_equilibrium: non-finite guess");
    Vector x = x_guess;
    Vector f = vector_field(spec, x, u0);
    double fnorm = f.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (fnorm < opt.tol) return x;
        Eigen::PartialPivLU<Matrix> lu(jacobian(spec, x, u0));
        if (!(lu.rcond() > 1e-14))
            throw SingularJacobian("Jacobian is singular at u0 = " + std::to_string(u0));
        const Vector dx = lu.solve(-f);
        double alpha = 1.0;
        for (;;) {
            const Vector trial = x + alpha * dx;
            const Vector ft = vector_field(spec, trial, u0);
            const double tn = ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(tn) && tn < (1.0 - 1e-4 * alpha) * fnorm) {
                x = trial;
                f = ft;
                fnorm = tn;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-10) {
                if (fnorm < 1e2 * opt.tol) return x;
                throw NewtonDiverged("step damping underflowed at u0 = " + std::to_string(u0) +
                                     " (residual " + std::to_string(fnorm) + ")");
            }
        }
    }
    if (fnorm < opt.tol) return x;
    throw NewtonDiverged("no convergence after " + std::to_string(opt.max_iterations) +
                         " iterations at u0 = " + std::to_string(u0));
}

// ---------------------------------------------------------------------------
// Point-wise linear algebra on the extended (x, u0) space
// ---------------------------------------------------------------------------

namespace detail {

inline Vector join(const Vector& x, double u0) {
    Vector z(x.size() + 1);
    z.head(x.size()) = x;
    z(x.size()) = u0;
    return z;
}

/// [F_x  F_u] at z, an N x (N+1) matrix.
inline Matrix extended_jacobian(const NetworkSpec& spec, const Vector& z) {
    const auto n = spec.size();
    const Vector x = z.head(n);
    const double u = z(n);
    Matrix E(n, n + 1);
    E.leftCols(n) = jacobian(spec, x, u);
    E.col(n) = parameter_derivative(spec, x, u);
    return E;
}

/// Unit tangent t with E t = 0, oriented so that <t, t_ref> > 0.
inline Vector tangent_at(const NetworkSpec& spec, const Vector& z, const Vector& t_ref) {
    const auto n = spec.size();
    Matrix K(n + 1, n + 1);
    K.topRows(n) = extended_jacobian(spec, z);
    K.row(n) = t_ref.transpose();
    Vector rhs = Vector::Zero(n + 1);
    rhs(n) = 1.0;
    Eigen::FullPivLU<Matrix> lu(K);
    Vector t = lu.solve(rhs);
    if (!t.allFinite() || t.norm() == 0.0) {
        // Fall back to the null vector of E (e.g. exactly at a branch point).
        Eigen::JacobiSVD<Matrix> svd(K.topRows(n), Eigen::ComputeFullV);
        t = svd.matrixV().col(n);
        if (t.dot(t_ref) < 0) t = -t;
    }
    return t.normalized();
}

struct Spectrum {
    double leading = 0.0;        ///< largest real part
    int positive_real = 0;       ///< real eigenvalues > 0
    double min_abs_real = 0.0;   ///< real eigenvalue closest to zero (magnitude)
};

inline Spectrum spectrum_of(const Matrix& J) {
    Eigen::EigenSolver<Matrix> solver(J, false);
    if (solver.info() != Eigen::Success) throw NonConvergence("Jacobian eigenvalue iteration failed");
    Spectrum s;
    s.leading = -std::numeric_limits<double>::infinity();
    s.min_abs_real = std::numeric_limits<double>::infinity();
    for (const auto& lam : solver.eigenvalues()) {
        s.leading = std::max(s.leading, lam.real());
        if (std::abs(lam.imag()) <= 1e-6 * (1.0 + std::abs(lam))) {
            if (lam.real() > 0) ++s.positive_real;
            s.min_abs_real = std::min(s.min_abs_real, std::abs(lam.real()));
        }
    }
    return s;
}

/// Newton on { F(x,u) = 0, <t_ref, z - z_ref> = s }.
struct Correction {
    Vector z;
    int iterations = 0;
    bool ok = false;
};

inline Correction correct(const NetworkSpec& spec, Vector z, const Vector& z_ref, const Vector& t_ref,
                          double s, int max_iterations = 10) {
    const auto n = spec.size();
    Correction c;
    Matrix K(n + 1, n + 1);
    Vector res(n + 1);
    for (int it = 0; it <= max_iterations; ++it) {
        res.head(n) = vector_field(spec, z.head(n), z(n));
        res(n) = t_ref.dot(z - z_ref) - s;
        if (!res.allFinite()) return c;
        if (res.lpNorm<Eigen::Infinity>() < kEquilibriumTol) {
            c.z = std::move(z);
            c.iterations = it;
            c.ok = true;
            return c;
        }
        if (it == max_iterations) break;
        K.topRows(n) = extended_jacobian(spec, z);
        K.row(n) = t_ref.transpose();
        Eigen::PartialPivLU<Matrix> lu(K);
        z -= lu.solve(res);
    }
    return c;
}

inline BranchPoint make_point(const NetworkSpec& spec, const Vector& z, const Vector& tangent) {
    const auto n = spec.size();
    BranchPoint p;
    p.x = z.head(n);
    p.u0 = z(n);
    p.leading_jac_eig = spectrum_of(jacobian(spec, p.x, p.u0)).leading;
    p.stable = p.leading_jac_eig < 0;
    p.tangent = tangent;
    return p;
}


}  // namespace detail

/// Branch point at an equilibrium (x, u0) with tangent oriented along
/// increasing u0 when `direction` > 0 (decreasing otherwise).
[[nodiscard]] inline BranchPoint branch_point_at(const NetworkSpec& spec, const Vector& x, double u0,
                                                 int direction = +1) {
    const auto n = spec.size();
    const Vector z = detail::join(x, u0);
    Vector hint = Vector::Zero(n + 1);
    hint(n) = direction >= 0 ? 1.0 : -1.0;
    Eigen::JacobiSVD<Matrix> svd(detail::extended_jacobian(spec, z), Eigen::ComputeFullV);
    Vector t = svd.matrixV().col(n);
    if (t.dot(hint) < 0) t = -t;
    return detail::make_point(spec, z, t.normalized());
}

// ---------------------------------------------------------------------------
// Event detection
// ---------------------------------------------------------------------------

enum class Normalization { UnitNorm, UnitMaxEntry };

struct EventOptions {
    int max_bisections = 40;
    bool classify_neutral = true;
    Normalization normalization = Normalization::UnitNorm;
    LSOptions ls{};
};

/// Singular point at a neutral-branch event, with null vectors scaled per `norm`.
[[nodiscard]] inline SingularPoint neutral_singular_point(const NetworkSpec& spec, double u0,
                                                          Normalization norm) {
    const Vector x0 = Vector::Zero(spec.size());
    auto k = kernel_vectors(jacobian(spec, x0, u0));
    Vector right = k.right.normalized();
    detail::fix_sign(right);
    if (norm == Normalization::UnitMaxEntry) right /= right.cwiseAbs().maxCoeff();
    const Vector left = k.left / k.left.dot(right);
    return {x0, u0, right, left};
}

namespace detail {

struct Probe {
    double s = 0.0;
    Vector z;
    int count = 0;
};

/// Recursively narrows [a, b] (arclength along t_ref from z_ref) to the
/// places where the count of positive real eigenvalues changes.
inline void localize(const NetworkSpec& spec, const Vector& z_ref, const Vector& t_ref,
                     const Probe& a, const Probe& b, int depth, int max_depth,
                     std::vector<std::pair<Probe, Probe>>& out) {
    if (a.count == b.count) return;
    if (depth >= max_depth || b.s - a.s < 1e-13) {
        out.emplace_back(a, b);
        return;
    }
    Probe m;
    m.s = 0.5 * (a.s + b.s);
    const Vector guess = a.z + (m.s - a.s) / (b.s - a.s) * (b.z - a.z);
    auto c = correct(spec, guess, z_ref, t_ref, m.s, 20);
    if (!c.ok) {
        out.emplace_back(a, b);
        return;
    }
    m.z = c.z;
    const auto n = spec.size();
    m.count = spectrum_of(jacobian(spec, m.z.head(n), m.z(n))).positive_real;
    localize(spec, z_ref, t_ref, a, m, depth + 1, max_depth, out);
    localize(spec, z_ref, t_ref, m, b, depth + 1, max_depth, out);
}

}  // namespace detail

/// Steady-state events between two consecutive branch points. The test
/// functions are the number of positive real Jacobian eigenvalues (a zero
/// crossing) and the sign of the tangent's u0 component (a fold).
[[nodiscard]] inline std::vector<BifurcationEvent> detect_events(const NetworkSpec& spec,
                                                                 const BranchPoint& a,
                                                                 const BranchPoint& b,
                                                                 const EventOptions& opt = {}) {
    const auto n = spec.size();
    std::vector<BifurcationEvent> events;
    const Vector za = detail::join(a.x, a.u0);
    const Vector zb = detail::join(b.x, b.u0);
    const Vector& t_ref = a.tangent;

    detail::Probe pa{0.0, za, detail::spectrum_of(jacobian(spec, a.x, a.u0)).positive_real};
    detail::Probe pb{t_ref.dot(zb - za), zb, detail::spectrum_of(jacobian(spec, b.x, b.u0)).positive_real};
    if (pa.count == pb.count) return events;

    std::vector<std::pair<detail::Probe, detail::Probe>> brackets;
    detail::localize(spec, za, t_ref, pa, pb, 0, opt.max_bisections, brackets);

    for (const auto& [lo, hi] : brackets) {
        const Vector ze = 0.5 * (lo.z + hi.z);
        auto c = detail::correct(spec, ze, za, t_ref, 0.5 * (lo.s + hi.s), 20);
        const Vector z = c.ok ? c.z : ze;
        const Vector x = z.head(n);
        const double u = z(n);
        const Matrix J = jacobian(spec, x, u);
        if (detail::spectrum_of(J).min_abs_real > 1e-6) continue;  // complex pair hitting the real axis

        BifurcationEvent e;
        e.u0 = u;
        e.x = x;
        e.multiplicity = std::abs(hi.count - lo.count);
        e.tangent = detail::tangent_at(spec, z, t_ref);
        e.critical_vector = kernel_vectors(J).right.normalized();
        detail::fix_sign(e.critical_vector);

        const double tu_lo = detail::tangent_at(spec, lo.z, t_ref)(n);
        const double tu_hi = detail::tangent_at(spec, hi.z, t_ref)(n);
        const bool neutral = x.lpNorm<Eigen::Infinity>() < 1e-9 && spec.b.isZero(0.0);

        if (tu_lo * tu_hi < 0 || (a.tangent(n) * b.tangent(n) < 0 && brackets.size() == 1)) {
            e.kind = EventKind::SaddleNode;
        } else if (e.multiplicity == 1 && neutral && opt.classify_neutral) {
            e.kind = EventKind::Unclassified;
            try {
                auto report = ls_derivatives(spec, neutral_singular_point(spec, u, opt.normalization), opt.ls);
                switch (report.classification) {
                    case Singularity::SupercriticalPitchfork:
                    case Singularity::SubcriticalPitchfork: e.kind = EventKind::Pitchfork; break;
                    case Singularity::Transcritical: e.kind = EventKind::Transcritical; break;
                    case Singularity::Degenerate: break;
                }
                e.detail = report;
            } catch (const Error&) {
            }
        } else {
            e.kind = EventKind::Unclassified;
        }
        events.push_back(std::move(e));
    }
    return events;
}

// ---------------------------------------------------------------------------
// Pseudo-arclength continuation
// ---------------------------------------------------------------------------

/// Traces the equilibrium branch through `seed` (in the direction of its
/// tangent) until u0 leaves [lo, hi], the branch closes on itself, or the
/// point budget runs out.
[[nodiscard]] inline Branch trace_branch(const NetworkSpec& spec, const BranchPoint& seed, double lo,
                                         double hi, const StepParams& step = {},
                                         const EventOptions& events = {}) {
    if (!(lo < hi)) throw std::invalid_argument("trace_branch: empty u0 range");
    if (seed.tangent.size() != spec.size() + 1)
        throw std::invalid_argument("trace_branch: seed tangent has wrong dimension");
    const auto n = spec.size();

    Branch branch;
    branch.points.push_back(seed);
    double h = std::clamp(step.initial, step.min, step.max);
    int underflows = 0;
    const Vector z_seed = detail::join(seed.x, seed.u0);
    bool left_seed = false;

    while (branch.points.size() < step.max_points) {
        const BranchPoint& p0 = branch.points.back();
        const Vector z0 = detail::join(p0.x, p0.u0);
        const Vector& t0 = p0.tangent;
        const double hs = underflows > 0 ? step.min * (underflows + 1) : h;

        auto c = detail::correct(spec, z0 + hs * t0, z0, t0, hs);
        Vector t1;
        bool ok = c.ok && (c.z - z0).norm() <= 2.0 * hs;
        if (ok) {
            t1 = detail::tangent_at(spec, c.z, t0);
            ok = t1.dot(t0) > 0.9;
        }
        if (!ok) {
            if (h > step.min && underflows == 0) {
                h = std::max(0.5 * h, step.min);
                continue;
            }
            if (++underflows >= 10)
                throw StallError("continuation step underflowed 10 times near u0 = " +
                                 std::to_string(p0.u0));
            continue;
        }
        underflows = 0;

        Vector z1 = c.z;
        bool last = false;
        if (z1(n) < lo || z1(n) > hi) {
            // Land the final point on the range boundary.
            const double edge = z1(n) > hi ? hi : lo;
            last = true;
            branch.stop_reason = "range";
            const double frac = (edge - z0(n)) / (z1(n) - z0(n));
            try {
                const Vector xe = newton_equilibrium(spec, z0.head(n) + frac * (z1.head(n) - z0.head(n)), edge);
                z1 = detail::join(xe, edge);
                t1 = detail::tangent_at(spec, z1, t0);
            } catch (const Error&) {
                break;
            }
            if ((z1 - z0).norm() > 2.0 * hs) break;
        }

        BranchPoint p1 = detail::make_point(spec, z1, t1);
        for (auto& e : detect_events(spec, p0, p1, events)) {
            e.after_point = branch.points.size() - 1;
            branch.events.push_back(std::move(e));
        }
        branch.points.push_back(std::move(p1));
        if (last) return branch;
        const double from_seed = (z1 - z_seed).norm();
        if (from_seed > 4.0 * step.max) left_seed = true;
        if (left_seed && from_seed < 1.5 * hs && t1.dot(seed.tangent) > 0.0) {
            branch.stop_reason = "loop";
            return branch;
        }
        if (c.iterations <= step.fast_iterations) h = std::min(h * step.grow, step.max);
    }
    if (branch.stop_reason.empty())
        branch.stop_reason = branch.points.size() >= step.max_points ? "budget" : "range";
    return branch;
}

// ---------------------------------------------------------------------------
// Branch switching
// ---------------------------------------------------------------------------

struct SwitchOptions {
    double amplitude = 1e-2;
    double u_offset = 5e-3;
};

/// First point on the branch crossing `event` transversally, at amplitude
/// `amplitude` along the new kernel direction on side `direction` (+1/-1).
[[nodiscard]] inline BranchPoint switch_branch(const NetworkSpec& spec, const BifurcationEvent& event,
                                               int direction, const SwitchOptions& opt = {}) {
    if (event.kind == EventKind::SaddleNode)
        throw std::invalid_argument("switch_branch: a saddle-node has no crossing branch");
    const auto n = spec.size();
    const double d = direction >= 0 ? 1.0 : -1.0;
    const Vector ze = detail::join(event.x, event.u0);

    // Kernel of [F_x F_u] at the branch point is two-dimensional; take the
    // direction orthogonal to the old tangent.
    Eigen::JacobiSVD<Matrix> svd(detail::extended_jacobian(spec, ze), Eigen::ComputeFullV);
    const Vector k1 = svd.matrixV().col(n);
    const Vector k2 = svd.matrixV().col(n - 1);
    const Vector& t_old = event.tangent;
    Vector phi = t_old.dot(k1) * k2 - t_old.dot(k2) * k1;
    if (phi.norm() < 1e-12) phi = k2;
    phi.normalize();
    if (phi.head(n).dot(event.critical_vector) < 0) phi = -phi;

    for (const double du : {opt.u_offset, -opt.u_offset}) {
        Vector guess = ze + d * opt.amplitude * phi;
        guess(n) += du;
        auto c = detail::correct(spec, guess, ze, phi, d * opt.amplitude, 30);
        if (!c.ok || (c.z - ze).norm() > 5.0 * opt.amplitude) continue;
        const Vector t = d * detail::tangent_at(spec, c.z, phi);
        return detail::make_point(spec, c.z, t);
    }
    throw NoBranchFound("no crossing branch at u0 = " + std::to_string(event.u0));
}

// ---------------------------------------------------------------------------
// Whole diagram
// ---------------------------------------------------------------------------

using Labeler = std::function<std::string(const Vector&)>;

/// Sign pattern of x, e.g. "+-0", with |x_i| < 1e-6 counted as zero.
[[nodiscard]] inline std::string sign_pattern(const Vector& x) {
    std::string s;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) > 1e-6 ? '+' : (x(i) < -1e-6 ? '-' : '0');
    return s;
}

struct DiagramOptions {
    StepParams step{};
    EventOptions events{};
    SwitchOptions switching{};
    int max_depth = 2;
    Labeler labeler = sign_pattern;
};

struct DiagramResult {
    std::vector<Branch> branches;
    std::vector<std::string> errors;
};

/// Primary branch from u0 = lo plus every branch reachable by switching at
/// non-fold events, down to `max_depth` levels.
[[nodiscard]] inline DiagramResult diagram(const NetworkSpec& spec, double lo, double hi,
                                           const DiagramOptions& opt = {}) {
    if (!(lo < hi)) throw std::invalid_argument("diagram: empty u0 range");
    const auto n = spec.size();
    DiagramResult out;

    BranchPoint primary;
    if (spec.b.isZero(0.0)) {
        Vector t = Vector::Zero(n + 1);
        t(n) = 1.0;
        primary = detail::make_point(spec, detail::join(Vector::Zero(n), lo), t);
    } else {
        try {
            primary = branch_point_at(spec, newton_equilibrium(spec, spec.b, lo), lo, +1);
        } catch (const Error& e) {
            out.errors.push_back(std::string("primary: ") + e.what());
            return out;
        }
    }

    struct Job {
        BranchPoint seed;
        int depth;
    };
    std::deque<Job> queue{{primary, 0}};
    while (!queue.empty()) {
        Job job = std::move(queue.front());
        queue.pop_front();
        Branch br;
        try {
            br = trace_branch(spec, job.seed, lo, hi, opt.step, opt.events);
        } catch (const Error& e) {
            out.errors.push_back(e.what());
            continue;
        }
        br.depth = job.depth;
        const auto last_stable = std::find_if(br.points.rbegin(), br.points.rend(),
                                              [](const BranchPoint& p) { return p.stable; });
        br.label = opt.labeler(last_stable != br.points.rend() ? last_stable->x : br.points.back().x);

        if (job.depth < opt.max_depth) {
            for (const auto& e : br.events) {
                if (e.kind == EventKind::SaddleNode || e.multiplicity != 1) continue;
                for (int d : {+1, -1}) {
                    try {
                        queue.push_back({switch_branch(spec, e, d, opt.switching), job.depth + 1});
                    } catch (const Error& err) {
                        out.errors.push_back(err.what());
                    }
                }
            }
        }
        out.branches.push_back(std::move(br));
    }

    std::map<std::string, int> seen;
    for (auto& br : out.branches) {
        const int k = ++seen[br.label];
        if (k > 1) br.label += "#" + std::to_string(k);
    }
    return out;
}

}  // namespace modnod
