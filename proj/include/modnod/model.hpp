#pragma once

#include "modnod/network.hpp"
#include "modnod/saturation.hpp"

namespace modnod {

namespace detail {

/// x^p for integer p >= 0 with 0^0 = 1 (needed for the n = 1 Jacobian term).
[[nodiscard]] inline double ipow(double x, int p) {
    double r = 1.0;
    for (; p > 0; --p) r *= x;
    return r;
}

}  // namespace detail

/// Entry (i, j) is u0 + sum_k m_ijk x_k^n.
[[nodiscard]] inline Matrix modulated_gains(const NetworkSpec& spec, const Vector& x, double u0) {
    Matrix gains = Matrix::Constant(spec.size(), spec.size(), u0);
    for (const auto& m : spec.M) gains(m.i, m.j) += m.weight * detail::ipow(x(m.k), spec.order);
    return gains;
}

/// p_i(x) = sum_j a_ij (u0 + sum_k m_ijk x_k^n) x_j
[[nodiscard]] inline Vector inner_argument(const NetworkSpec& spec, const Vector& x, double u0) {
    Vector p = u0 * (spec.A * x);
    for (const auto& m : spec.M)
        p(m.i) += spec.A(m.i, m.j) * m.weight * detail::ipow(x(m.k), spec.order) * x(m.j);
    return p;
}

/// x' = (-x + b + S(p(x))) / tau
[[nodiscard]] inline Vector vector_field(const NetworkSpec& spec, const Vector& x, double u0) {
    const Vector p = inner_argument(spec, x, u0);
    Vector f = spec.b - x;
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) += saturation_eval(spec.saturation, p(i));
    return f / spec.tau;
}

/// dp/dx:  a_il u0 + sum_k a_il m_ilk x_k^n + n sum_j a_ij m_ijl x_l^(n-1) x_j
[[nodiscard]] inline Matrix inner_argument_jacobian(const NetworkSpec& spec, const Vector& x,
                                                    double u0) {
    Matrix dp = u0 * spec.A;
    const int n = spec.order;
    for (const auto& m : spec.M) {
        const double a = spec.A(m.i, m.j);
        dp(m.i, m.j) += a * m.weight * detail::ipow(x(m.k), n);
        dp(m.i, m.k) += n * a * m.weight * detail::ipow(x(m.k), n - 1) * x(m.j);
    }
    return dp;
}

/// Analytic Jacobian of `vector_field` with respect to x.
[[nodiscard]] inline Matrix jacobian(const NetworkSpec& spec, const Vector& x, double u0) {
    const Vector p = inner_argument(spec, x, u0);
    Matrix J = inner_argument_jacobian(spec, x, u0);
    for (Eigen::Index i = 0; i < J.rows(); ++i) J.row(i) *= saturation_deriv(spec.saturation, p(i));
    J.diagonal().array() -= 1.0;
    return J / spec.tau;
}

/// Derivative of `vector_field` with respect to the basal attention u0.
[[nodiscard]] inline Vector parameter_derivative(const NetworkSpec& spec, const Vector& x,
                                                 double u0) {
    const Vector p = inner_argument(spec, x, u0);
    Vector du = spec.A * x;
    for (Eigen::Index i = 0; i < du.size(); ++i) du(i) *= saturation_deriv(spec.saturation, p(i));
    return du / spec.tau;
}

}  // namespace modnod
