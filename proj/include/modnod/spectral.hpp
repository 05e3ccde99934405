#pragma once

#include "modnod/errors.hpp"
#include "modnod/network.hpp"
#include "modnod/saturation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modnod {

/// Leading eigenstructure of A and the critical attention it implies.
struct EigenTriple {
    double lambda_max = 0.0;
    Vector v_max;  ///< right eigenvector, |v_max| = 1 unless rescaled
    Vector w_max;  ///< left eigenvector, <w_max, v_max> = 1
    double u0_star = 0.0;
    double spectral_gap = 0.0;
};

/// Absolute tolerance on the gap between the leading eigenvalue and the rest.
inline constexpr double kStrictLeaderTolerance = 1e-9;

/// All eigenvalues of a dense real matrix, sorted by decreasing real part
/// (then decreasing imaginary part) so the order is reproducible.
[[nodiscard]] inline std::vector<std::complex<double>> full_spectrum(const Matrix& A) {
    if (A.rows() < 1 || A.rows() != A.cols())
        throw std::invalid_argument("full_spectrum: expected a non-empty square matrix");
    if (!A.allFinite()) throw std::invalid_argument("full_spectrum: matrix has non-finite entries");
    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("real Schur iteration exceeded its budget for a " +
                             std::to_string(A.rows()) + "x" + std::to_string(A.rows()) + " matrix");
    const auto& ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

/// Right and left null vectors of a (numerically) singular square matrix,
/// taken from the smallest singular triple. Both have unit norm.
struct KernelPair {
    Vector right;
    Vector left;
    double sigma_min = 0.0;
};

[[nodiscard]] inline KernelPair kernel_vectors(const Matrix& B) {
    Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto last = B.cols() - 1;
    return {svd.matrixV().col(last), svd.matrixU().col(last), svd.singularValues()(last)};
}

namespace detail {

/// Flip `v` so its largest-magnitude entry (first one on ties) is positive.
inline void fix_sign(Vector& v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0) v = -v;
}

}  // namespace detail

/// Leading eigenpair of spec.A. Throws NoStrictLeader unless the eigenvalue of
/// largest real part is real, simple and separated from the rest by more than
/// kStrictLeaderTolerance.
[[nodiscard]] inline EigenTriple leading_eigenpair(const NetworkSpec& spec) {
    const Matrix& A = spec.A;
    const auto spectrum = full_spectrum(A);
    const auto lead = spectrum.front();
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if (std::abs(lead.imag()) > kStrictLeaderTolerance * scale)
        throw NoStrictLeader("eigenvalue of largest real part is complex (" +
                             std::to_string(lead.real()) + " +/- " +
                             std::to_string(std::abs(lead.imag())) + "i)");
    const double gap =
        spectrum.size() > 1 ? lead.real() - spectrum[1].real() : std::numeric_limits<double>::infinity();
    if (!(gap > kStrictLeaderTolerance))
        throw NoStrictLeader("leading eigenvalue " + std::to_string(lead.real()) +
                             " is not strictly separated (gap " + std::to_string(gap) + ")");

    EigenTriple out;
    out.lambda_max = lead.real();
    out.spectral_gap = gap;

    const Matrix shifted = A - out.lambda_max * Matrix::Identity(A.rows(), A.cols());
    auto kernel = kernel_vectors(shifted);
    out.v_max = kernel.right.normalized();
    detail::fix_sign(out.v_max);
    const double overlap = kernel.left.dot(out.v_max);
    if (std::abs(overlap) < 1e-12)
        throw NoStrictLeader("left and right leading eigenvectors are orthogonal");
    out.w_max = kernel.left / overlap;
    out.u0_star = 1.0 / (saturation_deriv(spec.saturation, 0.0) * out.lambda_max);
    return out;
}

/// 1 / (S'(0) lambda_max). Throws DegenerateLeader when lambda_max <= 0: no
/// opinion-forming bifurcation happens at positive attention.
[[nodiscard]] inline double critical_attention(const NetworkSpec& spec) {
    const auto eig = leading_eigenpair(spec);
    if (!(eig.lambda_max > 0.0))
        throw DegenerateLeader("leading eigenvalue " + std::to_string(eig.lambda_max) +
                               " is not positive");
    return eig.u0_star;
}

/// Rescales v_max so its largest-magnitude entry is 1 (w_max follows to keep
/// <w, v> = 1). For the consensus eigenvector this gives v = (1, ..., 1).
[[nodiscard]] inline EigenTriple with_unit_max_entry(EigenTriple eig) {
    const double s = eig.v_max.cwiseAbs().maxCoeff();
    eig.v_max /= s;
    eig.w_max *= s;
    return eig;
}

}  // namespace modnod
