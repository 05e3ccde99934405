#include <catch2/catch_amalgamated.hpp>

#include "modnod/model.hpp"
#include "modnod/scenarios.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace modnod;
using Catch::Approx;

TEST_CASE("saturation values", "[model][saturation]") {
    CHECK(saturation_eval(Saturation::odd(), 0.0) == 0.0);
    CHECK(std::abs(saturation_eval(Saturation::shifted(0.5), 0.0)) < 1e-16);
    const double big = saturation_eval(Saturation::odd(), 100.0);
    CHECK(big > 0.999999);
    CHECK(big <= 1.0);

    // Shifted formula written out.
    const double s = 0.5, z = 0.8;
    const double expected = (std::tanh(z - s) + std::tanh(s)) / (1 - std::tanh(s) * std::tanh(s));
    CHECK(saturation_eval(Saturation::shifted(s), z) == Approx(expected).epsilon(1e-15));
}

TEST_CASE("saturation derivative is 1 at the origin", "[model][saturation]") {
    CHECK(saturation_deriv(Saturation::odd(), 0.0) == 1.0);
    for (double s = -3.0; s <= 3.0; s += 0.25) {
        CAPTURE(s);
        CHECK(std::abs(saturation_deriv(Saturation::shifted(s), 0.0) - 1.0) < 1e-12);
    }
    const double h = 1e-5;
    const auto sat = Saturation::shifted(0.7);
    const double fd = (saturation_eval(sat, h) - saturation_eval(sat, -h)) / (2 * h);
    CHECK(fd == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("saturation derivative matches central differences", "[model][saturation]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dz(-3.0, 3.0);
    const double h = 1e-5;
    for (const auto sat : {Saturation::odd(), Saturation::shifted(-0.4), Saturation::shifted(1.1)}) {
        for (int t = 0; t < 20; ++t) {
            const double z = dz(rng);
            const double fd = (saturation_eval(sat, z + h) - saturation_eval(sat, z - h)) / (2 * h);
            const double d = saturation_deriv(sat, z);
            CAPTURE(z, sat.shift);
            CHECK(std::abs(d - fd) / std::abs(d) < 1e-8);
        }
    }
}

TEST_CASE("odd saturation is odd", "[model][saturation]") {
    for (double z = -5; z <= 5; z += 0.37)
        CHECK(saturation_eval(Saturation::odd(), -z) == -saturation_eval(Saturation::odd(), z));
}

TEST_CASE("modulated gains", "[model]") {
    Matrix A(3, 3);
    A << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    const auto plain = make_spec(A);
    const Matrix g = modulated_gains(plain, Vector::Constant(3, 0.3), 0.7);
    CHECK(g.isApprox(Matrix::Constant(3, 3, 0.7)));

    const auto two = build_two_node(1.0, 1);
    Vector x(2);
    x << 0.5, -0.2;
    Matrix expected = Matrix::Ones(2, 2);
    expected(1, 0) = 1.5;
    CHECK(modulated_gains(two, x, 1.0) == expected);

    const auto ring = build_influencer_ring(0.5);
    CHECK(modulated_gains(ring, Vector::Zero(5), -0.3) == Matrix::Constant(5, 5, -0.3));
}

TEST_CASE("inner argument", "[model]") {
    std::mt19937_64 rng(3);
    const auto spec = testing::random_spec(rng);
    CHECK(inner_argument(spec, Vector::Zero(spec.size()), 0.8).isZero(0.0));

    const auto ring = build_influencer_ring(0.0);
    const Vector p = inner_argument(ring, Vector::Ones(5), 0.5);
    for (int i = 0; i < 5; ++i) CHECK(p(i) == Approx(1.0));

    const auto two = build_two_node(1.0, 1);
    const Vector q = inner_argument(two, Vector::Ones(2), 1.0);
    CHECK(q(0) == Approx(-1.0));
    CHECK(q(1) == Approx(-2.0));
}

TEST_CASE("vector field", "[model]") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        auto spec = testing::random_spec(rng, {.zero_input = true});
        CHECK(vector_field(spec, Vector::Zero(spec.size()), 1.3).isZero(0.0));
    }

    for (int n : {1, 2, 3}) {
        const auto two = build_two_node(1.0, n);
        Vector x(2);
        x << 0.1, -0.1;
        const Vector f = vector_field(two, x, 1.0);
        const Vector oracle = testing::two_node_field(0.1, -0.1, 1.0, 1.0, n);
        CHECK((f - oracle).cwiseAbs().maxCoeff() < 1e-15);
    }

    auto spec = build_two_node(1.0, 1);
    spec.b << 0.3, 0.0;
    const Vector f = vector_field(spec, Vector::Zero(2), 2.0);
    CHECK(f(0) == 0.3);
    CHECK(f(1) == 0.0);
}

TEST_CASE("Jacobian at the origin ignores modulation", "[model][jacobian]") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto spec = testing::random_spec(rng);
        auto other = spec;
        other.M.clear();
        const double u0 = std::uniform_real_distribution<double>(-2, 2)(rng);
        const Matrix J = jacobian(spec, Vector::Zero(spec.size()), u0);
        CHECK(J == jacobian(other, Vector::Zero(spec.size()), u0));
        const Matrix expected = (-Matrix::Identity(spec.size(), spec.size()) + u0 * spec.A) / spec.tau;
        CHECK((J - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("analytic Jacobian matches central differences", "[model][jacobian]") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t) {
        const auto spec = testing::random_spec(rng);
        const Vector x = testing::random_vector(rng, spec.size());
        const double u0 = std::uniform_real_distribution<double>(-2, 2)(rng);
        const Matrix J = jacobian(spec, x, u0);
        const Matrix fd = testing::fd_jacobian(spec, x, u0);
        const double err = (J - fd).cwiseAbs().maxCoeff() / std::max(1.0, J.cwiseAbs().maxCoeff());
        CAPTURE(t, err);
        CHECK(err < 1e-6);
    }
}

TEST_CASE("two-node quadratic modulation Jacobian entry", "[model][jacobian]") {
    const auto spec = build_two_node(1.0, 2);
    Vector x(2);
    x << 0.3, 0.1;
    const double u0 = 1.0;
    // p_2 = a21 (u0 + m x1^2) x1, dp_2/dx_1 = a21 u0 + a21 m x1^2 + 2 a21 m x1 x1
    const double p2 = -(u0 + 0.09) * 0.3;
    const double dp = -u0 - 0.09 - 2 * 0.3 * 0.3;
    const double expected = (1 - std::tanh(p2) * std::tanh(p2)) * dp;
    CHECK(jacobian(spec, x, u0)(1, 0) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("order one Jacobian at a zero modulator", "[model][jacobian]") {
    // x_l^(n-1) with n = 1 is 1 even at x_l = 0.
    auto spec = build_two_node(2.0, 1);
    Vector x(2);
    x << 0.0, 0.4;
    const Matrix fd = testing::fd_jacobian(spec, x, 0.9);
    CHECK((jacobian(spec, x, 0.9) - fd).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("odd equivariance for even order", "[model][symmetry]") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 100; ++t) {
        auto spec = testing::random_spec(rng, {.zero_input = true, .allow_shifted = false, .order = 2});
        if (t % 5 == 0) spec.M.clear();
        const Vector x = testing::random_vector(rng, spec.size());
        const double u0 = std::uniform_real_distribution<double>(-2, 2)(rng);
        const Vector r = vector_field(spec, -x, u0) + vector_field(spec, x, u0);
        CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("parameter derivative matches central differences", "[model]") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        const auto spec = testing::random_spec(rng);
        const Vector x = testing::random_vector(rng, spec.size());
        const double u0 = 0.3, h = 1e-6;
        const Vector fd = (vector_field(spec, x, u0 + h) - vector_field(spec, x, u0 - h)) / (2 * h);
        CHECK((parameter_derivative(spec, x, u0) - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("spec validation", "[model][network]") {
    auto spec = build_two_node(1.0, 1);
    CHECK_NOTHROW(validate(spec));
    auto dup = spec;
    dup.M.push_back(dup.M.front());
    CHECK_THROWS_AS(validate(dup), ValidationError);
    auto bad_idx = spec;
    bad_idx.M.push_back({0, 2, 0, 1.0});
    CHECK_THROWS_AS(validate(bad_idx), ValidationError);
    auto bad_tau = spec;
    bad_tau.tau = 0.0;
    CHECK_THROWS_AS(validate(bad_tau), ValidationError);
    auto bad_order = spec;
    bad_order.order = 0;
    CHECK_THROWS_AS(validate(bad_order), ValidationError);
    auto bad_b = spec;
    bad_b.b = Vector::Zero(3);
    CHECK_THROWS_AS(validate(bad_b), ValidationError);
}
