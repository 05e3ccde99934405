#pragma once

#include "modnod/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace modnod {

/// Two mutually inhibiting nodes; node 1 modulates the 1 -> 2 link with
/// weight m_211 = m_strength and order n.
struct TwoNode {
    double m_strength = 1.0;
    int n = 1;
    friend bool operator==(const TwoNode&, const TwoNode&) = default;
};

/// Five-node undirected ring; node 1 modulates every link with weight m_bar.
struct InfluencerRing {
    double m_bar = 0.0;
    friend bool operator==(const InfluencerRing&, const InfluencerRing&) = default;
};

/// Drive-or-stay block {1,2} (inhibition alpha) and steer-left-or-right block
/// {3,4} (inhibition beta) whose mutual inhibition is modulated by x_1.
struct DriveSteer {
    double alpha = 1.0;
    double beta = 0.3;
    double m_bar = 0.0;
    friend bool operator==(const DriveSteer&, const DriveSteer&) = default;
};

using ScenarioId = std::variant<TwoNode, InfluencerRing, DriveSteer>;

[[nodiscard]] inline NetworkSpec build_two_node(double m_strength, int n) {
    if (n < 1) throw std::invalid_argument("build_two_node: order must be >= 1");
    Matrix A(2, 2);
    A << 0, -1,
        -1, 0;
    return make_spec(A, {{1, 0, 0, m_strength}}, n);
}

[[nodiscard]] inline NetworkSpec build_influencer_ring(double m_bar) {
    if (!(m_bar >= 0.0)) throw std::invalid_argument("build_influencer_ring: m_bar must be >= 0");
    constexpr int N = 5;
    const double generator[N] = {0, 1, 0, 0, 1};
    Matrix A(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) A(i, j) = generator[(j - i + N) % N];
    std::vector<Modulation> M;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (A(i, j) != 0.0) M.push_back({i, j, 0, m_bar * A(i, j)});
    return make_spec(A, std::move(M), 1);
}

/// The {3,4} link weight is a_34 (u0 + m_341 x_1) = -(beta u0 + m_bar x_1),
/// so a positive x_1 (drive) strengthens the steering inhibition.
[[nodiscard]] inline NetworkSpec build_drive_steer(double alpha, double beta, double m_bar) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("build_drive_steer: alpha and beta must be positive");
    Matrix A = Matrix::Zero(4, 4);
    A(0, 1) = A(1, 0) = -alpha;
    A(2, 3) = A(3, 2) = -beta;
    return make_spec(A, {{2, 3, 0, m_bar / beta}, {3, 2, 0, m_bar / beta}}, 1);
}

[[nodiscard]] inline NetworkSpec build(const ScenarioId& id) {
    return std::visit(
        [](const auto& s) -> NetworkSpec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TwoNode>) return build_two_node(s.m_strength, s.n);
            else if constexpr (std::is_same_v<T, InfluencerRing>) return build_influencer_ring(s.m_bar);
            else return build_drive_steer(s.alpha, s.beta, s.m_bar);
        },
        id);
}

[[nodiscard]] inline std::string_view scenario_name(const ScenarioId& id) {
    switch (id.index()) {
        case 0: return "two_node";
        case 1: return "influencer_ring";
        default: return "drive_steer";
    }
}

/// Navigation labels for the drive/steer network: id, dr, st, then an
/// l/r suffix once the steering block has decided. Other patterns fall back
/// to a bracketed sign pattern.
[[nodiscard]] inline std::string drive_steer_label(const Vector& x) {
    constexpr double zero = 1e-6;
    const auto sgn = [](double v) { return v > zero ? 1 : (v < -zero ? -1 : 0); };
    std::string label;
    const int s1 = sgn(x(0)), s2 = sgn(x(1)), s3 = sgn(x(2)), s4 = sgn(x(3));
    if (s1 == 0 && s2 == 0) label = "id";
    else if (s1 > 0 && s2 < 0) label = "dr";
    else if (s1 < 0 && s2 > 0) label = "st";
    else return "[" + std::string(1, "-0+"[s1 + 1]) + "-0+"[s2 + 1] + "-0+"[s3 + 1] + "-0+"[s4 + 1] + "]";
    if (s3 == 0 && s4 == 0) return label;
    if (s3 > 0 && s4 < 0) return label + "l";
    if (s3 < 0 && s4 > 0) return label + "r";
    return label + "[" + "-0+"[s3 + 1] + "-0+"[s4 + 1] + "]";
}

}  // namespace modnod
