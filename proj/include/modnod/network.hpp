#pragma once

#include "modnod/errors.hpp"
#include "modnod/saturation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace modnod {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Opinion state x; x_i > 0 favours option 1 (or option i in the
/// single-agent reading).
using OpinionState = Vector;

/// One modulatory weight m_ijk: opinion k modulates the additive link a_ij.
/// Indices are 0-based in code; the JSON config uses 1-based indices.
struct Modulation {
    int i = 0;
    int j = 0;
    int k = 0;
    double weight = 0.0;

    friend bool operator==(const Modulation&, const Modulation&) = default;
};

/// A complete model instance
///   tau x_i' = -x_i + b_i + S( sum_j a_ij (u0 + sum_k m_ijk x_k^n) x_j ).
/// The basal attention u0 is not part of the spec; it is the bifurcation
/// parameter passed to every evaluation.
struct NetworkSpec {
    Matrix A;
    std::vector<Modulation> M;
    int order = 1;
    Saturation saturation{};
    Vector b;
    double tau = 1.0;

    [[nodiscard]] int size() const { return static_cast<int>(A.rows()); }

    friend bool operator==(const NetworkSpec& lhs, const NetworkSpec& rhs) {
        return lhs.A.rows() == rhs.A.rows() && lhs.A.cols() == rhs.A.cols() &&
               lhs.A == rhs.A && lhs.M == rhs.M && lhs.order == rhs.order &&
               lhs.saturation == rhs.saturation && lhs.b.size() == rhs.b.size() &&
               lhs.b == rhs.b && lhs.tau == rhs.tau;
    }
};

/// Zero-input spec with no modulation; a convenient starting point for builders.
[[nodiscard]] inline NetworkSpec make_spec(Matrix A, std::vector<Modulation> M = {},
                                           int order = 1) {
    NetworkSpec spec;
    spec.b = Vector::Zero(A.rows());
    spec.A = std::move(A);
    spec.M = std::move(M);
    spec.order = order;
    return spec;
}

[[nodiscard]] inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Throws ValidationError naming the first violated invariant.
inline void validate(const NetworkSpec& spec) {
    const auto n = spec.A.rows();
    if (n < 1) throw ValidationError("A: network must have at least one node");
    if (spec.A.cols() != n)
        throw ValidationError("A: expected a square matrix, got " + std::to_string(n) + "x" +
                              std::to_string(spec.A.cols()));
    if (!spec.A.allFinite()) throw ValidationError("A: entries must be finite");
    if (spec.b.size() != n)
        throw ValidationError("b: expected length " + std::to_string(n) + ", got " +
                              std::to_string(spec.b.size()));
    if (!spec.b.allFinite()) throw ValidationError("b: entries must be finite");
    if (spec.order < 1) throw ValidationError("n: modulation order must be >= 1");
    if (!(spec.tau > 0.0) || !std::isfinite(spec.tau))
        throw ValidationError("tau: must be a positive finite number");
    if (!std::isfinite(spec.saturation.shift))
        throw ValidationError("saturation.s: must be finite");

    std::set<std::tuple<int, int, int>> seen;
    for (std::size_t e = 0; e < spec.M.size(); ++e) {
        const auto& m = spec.M[e];
        const auto where = "M[" + std::to_string(e) + "]";
        for (int idx : {m.i, m.j, m.k}) {
            if (idx < 0 || idx >= n)
                throw ValidationError(where + ": index " + std::to_string(idx + 1) +
                                      " outside [1, " + std::to_string(n) + "]");
        }
        if (!std::isfinite(m.weight)) throw ValidationError(where + ": weight must be finite");
        if (!seen.emplace(m.i, m.j, m.k).second)
            throw ValidationError(where + ": duplicate triplet (" + std::to_string(m.i + 1) + ", " +
                                  std::to_string(m.j + 1) + ", " + std::to_string(m.k + 1) + ")");
    }
}

}  // namespace modnod
