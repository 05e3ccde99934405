#pragma once

#include "modnod/errors.hpp"
#include "modnod/model.hpp"
#include "modnod/spectral.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>
#include <string_view>

namespace modnod {

/// A simple steady-state singularity (x_c, u_c) of the equilibrium map with
/// right/left null vectors of the Jacobian. <left, right> must be 1.
struct SingularPoint {
    Vector x;
    double u0 = 0.0;
    Vector right;
    Vector left;
};

[[nodiscard]] inline SingularPoint singular_point(const NetworkSpec& spec, const EigenTriple& eig) {
    return {Vector::Zero(spec.size()), eig.u0_star, eig.v_max, eig.w_max};
}

enum class Singularity { SupercriticalPitchfork, SubcriticalPitchfork, Transcritical, Degenerate };

[[nodiscard]] inline std::string_view to_string(Singularity s) {
    switch (s) {
        case Singularity::SupercriticalPitchfork: return "SupercriticalPitchfork";
        case Singularity::SubcriticalPitchfork: return "SubcriticalPitchfork";
        case Singularity::Transcritical: return "Transcritical";
        case Singularity::Degenerate: return "Degenerate";
    }
    return "Degenerate";
}

/// Finite-difference derivatives of the reduced scalar equation g(v, u0) at
/// the singular point, plus the resulting recognition.
struct LSReport {
    double g = 0.0;
    double g_v = 0.0;
    double g_u0 = 0.0;
    double g_vv = 0.0;
    double g_vu0 = 0.0;
    double g_vvv = 0.0;
    Singularity classification = Singularity::Degenerate;
    double h_v = 0.0;
    double h_u = 0.0;
    /// Largest-magnitude entry and norm of the critical vector the reduced
    /// coordinate v is measured along (the derivatives scale with it).
    double v_max_entry = 0.0;
    double v_norm = 0.0;
};

struct LSOptions {
    double h_v = 5e-3;
    double h_u_rel = 5e-3;  ///< h_u = h_u_rel * |u_c|
    double tol = 1e-4;
    double domain_v = 0.3;
    double domain_u_rel = 0.3;
};

/// Reduced equation g(v, u0): solves for y with <right, y> = 0 such that the
/// range part of F(x_c + v right + y, u0) vanishes, i.e. F = mu * right, and
/// returns mu = <left, F>. F is the vector field without the 1/tau factor.
[[nodiscard]] inline double ls_reduced_g(const NetworkSpec& spec, const SingularPoint& sp, double v,
                                         double u0, const LSOptions& opt = {}) {
    if (std::abs(v) > opt.domain_v || std::abs(u0 - sp.u0) > opt.domain_u_rel * std::abs(sp.u0))
        throw OutOfDomain("(v, u0) = (" + std::to_string(v) + ", " + std::to_string(u0) +
                          ") outside the reduction neighbourhood of u0 = " + std::to_string(sp.u0));
    const auto n = spec.size();
    const Vector base = sp.x + v * sp.right;

    Vector y = Vector::Zero(n);
    double mu = sp.left.dot(vector_field(spec, base, u0)) * spec.tau;
    Matrix K(n + 1, n + 1);
    Vector res(n + 1);
    for (int it = 0; it < 50; ++it) {
        const Vector x = base + y;
        res.head(n) = vector_field(spec, x, u0) * spec.tau - mu * sp.right;
        res(n) = sp.right.dot(y);
        K.topLeftCorner(n, n) = jacobian(spec, x, u0) * spec.tau;
        K.topRightCorner(n, 1) = -sp.right;
        K.bottomLeftCorner(1, n) = sp.right.transpose();
        K(n, n) = 0.0;
        Eigen::FullPivLU<Matrix> lu(K);
        if (!lu.isInvertible())
            throw ComplementDiverged("bordered complement system is singular at v = " +
                                     std::to_string(v));
        const Vector step = lu.solve(res);
        y -= step.head(n);
        mu -= step(n);
        if (!y.allFinite() || !std::isfinite(mu)) break;
        if (step.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + y.lpNorm<Eigen::Infinity>() + std::abs(mu)))
            return mu;
        if (res.lpNorm<Eigen::Infinity>() < 1e-16) return mu;
    }
    throw ComplementDiverged("complement Newton did not converge at (v, u0) = (" +
                             std::to_string(v) + ", " + std::to_string(u0) + ")");
}

[[nodiscard]] inline double ls_reduced_g(const NetworkSpec& spec, const EigenTriple& eig, double v,
                                         double u0, const LSOptions& opt = {}) {
    return ls_reduced_g(spec, singular_point(spec, eig), v, u0, opt);
}

/// Recognition of the singularity from the reduced derivatives. Derivatives
/// are divided by |g_vu0| (when it is resolvable) before comparing with tol.
[[nodiscard]] inline Singularity classify_singularity(const LSReport& r, double tol) {
    const double scale = std::abs(r.g_vu0) > tol ? std::abs(r.g_vu0) : 1.0;
    const auto small = [&](double d) { return std::abs(d) / scale < tol; };
    if (!small(r.g) || !small(r.g_v)) return Singularity::Degenerate;
    const bool has_vu = !small(r.g_vu0);
    if (small(r.g_vv) && !small(r.g_vvv) && has_vu) {
        // Cubic branch v^2 ~ -g_vu0 (u0 - u*) / g_vvv: exists and is stable above u*
        // exactly when g_vvv and g_vu0 have opposite signs.
        return (r.g_vvv < 0) != (r.g_vu0 < 0) ? Singularity::SupercriticalPitchfork
                                              : Singularity::SubcriticalPitchfork;
    }
    if (!small(r.g_vv) && has_vu) return Singularity::Transcritical;
    return Singularity::Degenerate;
}

/// Central differences of g on a 5 (v) x 3 (u0) stencil around the singular point.
[[nodiscard]] inline LSReport ls_derivatives(const NetworkSpec& spec, const SingularPoint& sp,
                                             const LSOptions& opt = {}) {
    const double h = opt.h_v;
    const double k = opt.h_u_rel * std::abs(sp.u0);
    const auto g = [&](int iv, int iu) { return ls_reduced_g(spec, sp, iv * h, sp.u0 + iu * k, opt); };

    const double g00 = g(0, 0);
    const double gp = g(1, 0), gm = g(-1, 0);
    const double gpp = g(2, 0), gmm = g(-2, 0);

    LSReport r;
    r.g = g00;
    r.g_v = (gp - gm) / (2 * h);
    r.g_u0 = (g(0, 1) - g(0, -1)) / (2 * k);
    r.g_vv = (gp - 2 * g00 + gm) / (h * h);
    r.g_vu0 = (g(1, 1) - g(1, -1) - g(-1, 1) + g(-1, -1)) / (4 * h * k);
    r.g_vvv = (gpp - 2 * gp + 2 * gm - gmm) / (2 * h * h * h);
    r.h_v = h;
    r.h_u = k;
    r.v_max_entry = sp.right.cwiseAbs().maxCoeff();
    r.v_norm = sp.right.norm();
    r.classification = classify_singularity(r, opt.tol);
    return r;
}

[[nodiscard]] inline LSReport ls_derivatives(const NetworkSpec& spec, const EigenTriple& eig,
                                             const LSOptions& opt = {}) {
    return ls_derivatives(spec, singular_point(spec, eig), opt);
}

}  // namespace modnod
