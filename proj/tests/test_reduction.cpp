#include <catch2/catch_amalgamated.hpp>

#include "modnod/continuation.hpp"
#include "modnod/reduction.hpp"
#include "modnod/scenarios.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace modnod;
using Catch::Approx;

namespace {

SingularPoint unit_max_point(const NetworkSpec& spec) {
    return neutral_singular_point(spec, leading_eigenpair(spec).u0_star, Normalization::UnitMaxEntry);
}

}  // namespace

TEST_CASE("reduced equation vanishes at the singular point", "[reduction]") {
    for (const auto& spec : {build_two_node(1, 1), build_influencer_ring(0.5), build_drive_steer(1, 0.3, 2)}) {
        const auto eig = leading_eigenpair(spec);
        CHECK(ls_reduced_g(spec, eig, 0.0, eig.u0_star) == 0.0);
        CHECK(std::abs(ls_reduced_g(spec, eig, 0.0, 1.1 * eig.u0_star)) < 1e-15);
    }
}

TEST_CASE("reduced equation is odd for equivariant networks", "[reduction]") {
    const auto spec = build_two_node(1, 2);
    const auto eig = leading_eigenpair(spec);
    for (double v : {0.01, 0.05, 0.2})
        for (double du : {-0.1, 0.0, 0.1}) {
            const double u = eig.u0_star * (1 + du);
            CHECK(ls_reduced_g(spec, eig, v, u) == Approx(-ls_reduced_g(spec, eig, -v, u)).margin(1e-14));
        }
}

TEST_CASE("unmodulated pair against the closed form", "[reduction]") {
    // With M = 0, F(v V) is parallel to V = (1, -1)/sqrt2, so y = 0 and
    // g(v, u) = sqrt2 (-x + tanh(u x)) with x = v / sqrt2.
    const auto spec = build_two_node(0, 1);
    const auto eig = leading_eigenpair(spec);
    for (double v : {-0.2, -0.05, 0.03, 0.25})
        for (double u : {0.8, 1.0, 1.15}) {
            const double x = v / std::sqrt(2.0);
            const double expected = std::sqrt(2.0) * (-x + std::tanh(u * x));
            CHECK(ls_reduced_g(spec, eig, v, u) == Approx(expected).margin(1e-14));
        }
    const auto r = ls_derivatives(spec, eig);
    // g_vu0 = 1 and g_vvv = -u^3 = -1.
    CHECK(r.g_vu0 == Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(r.g_vv) < 1e-8);
    CHECK(r.g_vvv == Approx(-1.0).epsilon(1e-4));
    CHECK(r.classification == Singularity::SupercriticalPitchfork);
}

TEST_CASE("ring derivatives under unit max-entry scaling", "[reduction]") {
    // Along V = (1,...,1): g_vu0 = 2, g_vv = 4 m_bar, g_vvv = -2.
    for (double m : {0.0, 0.25, 0.5, 1.0}) {
        CAPTURE(m);
        const auto spec = build_influencer_ring(m);
        const auto sp = unit_max_point(spec);
        CHECK(sp.right.cwiseAbs().maxCoeff() == 1.0);
        CHECK(sp.left.dot(sp.right) == Approx(1.0).epsilon(1e-14));
        const auto r = ls_derivatives(spec, sp);
        CHECK(r.v_max_entry == 1.0);
        CHECK(r.g_vu0 == Approx(2.0).epsilon(1e-3));
        CHECK(r.g_vvv == Approx(-2.0).epsilon(5e-3));
        if (m == 0.0) {
            CHECK(std::abs(r.g_vv) < 1e-6);
            CHECK(r.classification == Singularity::SupercriticalPitchfork);
        } else {
            CHECK(r.g_vv == Approx(4 * m).epsilon(1e-3));
            CHECK(r.classification == Singularity::Transcritical);
        }
    }
}

TEST_CASE("two-node recognitions", "[reduction]") {
    CHECK(ls_derivatives(build_two_node(1, 1), leading_eigenpair(build_two_node(1, 1))).classification ==
          Singularity::Transcritical);
    CHECK(ls_derivatives(build_two_node(1, 2), leading_eigenpair(build_two_node(1, 2))).classification ==
          Singularity::SubcriticalPitchfork);
    CHECK(ls_derivatives(build_two_node(1, 3), leading_eigenpair(build_two_node(1, 3))).classification ==
          Singularity::SupercriticalPitchfork);
    CHECK(ls_derivatives(build_two_node(-1, 2), leading_eigenpair(build_two_node(-1, 2))).classification ==
          Singularity::SupercriticalPitchfork);
}

TEST_CASE("classification rules", "[reduction]") {
    LSReport r;
    r.g_vu0 = 2.0;
    r.g_vvv = -1.0;
    CHECK(classify_singularity(r, 1e-4) == Singularity::SupercriticalPitchfork);
    r.g_vvv = 1.0;
    CHECK(classify_singularity(r, 1e-4) == Singularity::SubcriticalPitchfork);
    r.g_vu0 = -2.0;
    CHECK(classify_singularity(r, 1e-4) == Singularity::SupercriticalPitchfork);
    r.g_vv = 0.5;
    CHECK(classify_singularity(r, 1e-4) == Singularity::Transcritical);
    r.g_vv = 1e-5;  // relative to |g_vu0| = 2
    CHECK(classify_singularity(r, 1e-4) == Singularity::SupercriticalPitchfork);
    r.g_v = 0.1;
    CHECK(classify_singularity(r, 1e-4) == Singularity::Degenerate);
    r = {};
    r.g_vv = 1.0;
    CHECK(classify_singularity(r, 1e-4) == Singularity::Degenerate);
    r = {};
    CHECK(classify_singularity(r, 1e-4) == Singularity::Degenerate);
    CHECK(to_string(Singularity::Transcritical) == "Transcritical");
}

TEST_CASE("reduced linear part does not see modulation", "[reduction][property]") {
    // J(0) is independent of M, so g_v and g_vu0 at the neutral singular
    // point are too; only the higher terms change.
    std::mt19937_64 rng(99);
    int done = 0;
    for (int rep = 0; rep < 200 && done < 30; ++rep) {
        auto spec = testing::random_spec(rng, {.zero_input = true, .allow_shifted = false});
        EigenTriple eig;
        try {
            eig = leading_eigenpair(spec);
            (void)critical_attention(spec);
        } catch (const Error&) {
            continue;
        }
        auto bare = spec;
        bare.M.clear();
        const auto sp = singular_point(spec, eig);
        LSReport a, b;
        try {
            a = ls_derivatives(spec, sp);
            b = ls_derivatives(bare, sp);
        } catch (const Error&) {
            continue;
        }
        // g_v(u0) = <w, (-I + u0 A) v> = u0 lambda - 1 for either network.
        for (const auto& r : {a, b}) {
            CHECK(r.g_vu0 == Approx(eig.lambda_max).epsilon(1e-3));
            CHECK(std::abs(r.g_v) < 1e-3 * eig.lambda_max);
        }
        ++done;
    }
    CHECK(done >= 20);
}

TEST_CASE("reduction domain", "[reduction]") {
    const auto spec = build_influencer_ring(0);
    const auto eig = leading_eigenpair(spec);
    CHECK_THROWS_AS(ls_reduced_g(spec, eig, 0.5, 0.5), OutOfDomain);
    CHECK_THROWS_AS(ls_reduced_g(spec, eig, 0.0, 0.8), OutOfDomain);
    CHECK_NOTHROW(ls_reduced_g(spec, eig, 0.29, 0.6));
}
