#pragma once

// Test-only helpers: random instance generators and independent oracles.

#include "modnod/model.hpp"
#include "modnod/network.hpp"

#include <random>
#include <set>
#include <tuple>

namespace modnod::testing {

struct RandomSpecOptions {
    int min_n = 2;
    int max_n = 6;
    bool zero_input = false;
    bool allow_shifted = true;
    int order = 0;  ///< 0 picks 1..3 at random
};

inline NetworkSpec random_spec(std::mt19937_64& rng, const RandomSpecOptions& opt = {}) {
    std::uniform_int_distribution<int> size(opt.min_n, opt.max_n);
    std::uniform_real_distribution<double> w(-2.0, 2.0);
    const int n = size(rng);
    NetworkSpec spec;
    spec.A = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) spec.A(i, j) = w(rng);
    std::uniform_int_distribution<int> idx(0, n - 1);
    std::uniform_int_distribution<int> count(0, 2 * n);
    std::set<std::tuple<int, int, int>> used;
    for (int c = count(rng); c > 0; --c) {
        Modulation m{idx(rng), idx(rng), idx(rng), w(rng)};
        if (used.emplace(m.i, m.j, m.k).second) spec.M.push_back(m);
    }
    spec.order = opt.order > 0 ? opt.order : std::uniform_int_distribution<int>(1, 3)(rng);
    if (opt.allow_shifted && std::bernoulli_distribution(0.5)(rng))
        spec.saturation = Saturation::shifted(std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
    spec.b = Vector::Zero(n);
    if (!opt.zero_input)
        for (int i = 0; i < n; ++i) spec.b(i) = 0.5 * w(rng);
    spec.tau = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    return spec;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double scale = 2.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

/// Central-difference Jacobian of vector_field.
inline Matrix fd_jacobian(const NetworkSpec& spec, const Vector& x, double u0, double h = 1e-5) {
    const auto n = x.size();
    Matrix J(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        Vector xp = x, xm = x;
        xp(l) += h;
        xm(l) -= h;
        J.col(l) = (vector_field(spec, xp, u0) - vector_field(spec, xm, u0)) / (2 * h);
    }
    return J;
}

/// Two-node system written out component by component, independent of the
/// generic evaluation path.
inline Vector two_node_field(double x1, double x2, double u0, double m211, int n, double tau = 1.0) {
    const double a12 = -1.0, a21 = -1.0;
    const double p1 = (u0)*a12 * x2;
    const double p2 = (u0 + m211 * std::pow(x1, n)) * a21 * x1;
    Vector f(2);
    f << (-x1 + std::tanh(p1)) / tau, (-x2 + std::tanh(p2)) / tau;
    return f;
}

/// Bisection root of f on [lo, hi] (f(lo), f(hi) of opposite sign).
template <class F>
double bisect(F f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) lo = mid, flo = fm;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace modnod::testing
