#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scalar1d/errors.hpp"
#include "scalar1d/picard.hpp"

using namespace scalar1d;

namespace {

const ParticleParams kUnit{1.0, 1.0};

RadiationProfile gentle() {
    return RadiationProfile(
        {ProfileComponent{ProfileTarget::V0, ProfileKind::PolySpline, 4.0, 2.0, 0.02}});
}

// Random curve in the Lipschitz class (slopes capped at a fraction of k_vec,
// q(0) = 0), which keeps it inside the admissible mass region.
SampledCurve random_admissible(oracles::Rng& rng, double horizon, std::size_t nodes,
                               const std::array<double, 3>& k_vec) {
    SampledCurve q(horizon, nodes);
    const double h = horizon / static_cast<double>(nodes - 1);
    for (std::size_t i = 1; i < nodes; ++i)
        for (int c = 0; c < 3; ++c)
            q[i][c] = q[i - 1][c] + h * rng.uniform(-0.9 * k_vec[c], 0.9 * k_vec[c]);
    return q;
}

}  // namespace

TEST_CASE("weighted distance basics") {
    SampledCurve a(4.0, 4097), b(4.0, 4097);
    SUBCASE("curve against itself") { CHECK(weighted_distance(a, a, 1.0) == 0.0); }
    SUBCASE("constant offset is measured at t = 0") {
        for (std::size_t i = 0; i < b.nodes(); ++i) b[i] = {3.0, 0.0, 4.0};
        CHECK(weighted_distance(a, b, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
    }
    SUBCASE("ramp in the first component peaks at t = 1 for gamma = 1") {
        for (std::size_t i = 0; i < b.nodes(); ++i) b[i] = {b.time_at(i), 0.0, 0.0};
        // sup of t e^{-t} is e^{-1}, and t = 1 is a grid node here
        CHECK(weighted_distance(a, b, 1.0) ==
              doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("grid mismatch is an error") {
        SampledCurve c(4.0, 129);
        CHECK_THROWS_AS(weighted_distance(a, c, 1.0), GridMismatch);
    }
}

TEST_CASE("picard map of the zero curve with no radiation is the stationary ramp") {
    SampledCurve zero(6.0, 257);
    const SampledCurve out = picard_map(kUnit, RadiationProfile{}, zero);
    for (std::size_t i = 0; i < out.nodes(); ++i) {
        CHECK(out[i][0] == 0.0);
        CHECK(out[i][1] == 0.0);
        CHECK(out[i][2] == doctest::Approx(0.5 * out.time_at(i)).epsilon(1e-14));
    }
}

TEST_CASE("the integrated solution is a fixed point of the map to quadrature accuracy") {
    auto p = gentle();
    const Trajectory traj = integrate(kUnit, p, 4.0);
    const std::size_t n = 65537;
    SampledCurve q(4.0, n);
    for (std::size_t i = 0; i < n; ++i) {
        const ReducedState s = traj.state(q.time_at(i));
        q[i] = {s.Q, s.p, s.W};
    }
    const SampledCurve Fq = picard_map(kUnit, p, q);
    CHECK(sup_distance(q, Fq) <= 1e-8);
}

TEST_CASE("map output stays in the Lipschitz class") {
    oracles::Rng rng(31337u);
    auto p = gentle();
    const CurveSpaceSpec spec = make_curve_space(kUnit, p, 8.0);
    for (int trial = 0; trial < 10; ++trial) {
        const SampledCurve q = random_admissible(rng, 8.0, 513, spec.k_vec);
        const auto k = picard_map(kUnit, p, q).lipschitz_constants();
        CHECK(k[0] <= spec.k_vec[0] * (1.0 + 1e-9));
        CHECK(k[1] <= spec.k_vec[1] * (1.0 + 1e-9));
        CHECK(k[2] <= spec.k_vec[2] * (1.0 + 1e-9));
    }
}

TEST_CASE("lipschitz estimate") {
    SUBCASE("closed form with no radiation") {
        // K = a^2/2, K' = 0, m_V = m~: row sums are (K, 1, |a|) times
        // (1 + a^2/2 + K + |a|/2) / m_V, so for unit parameters L = 2.5 * 1.5.
        CHECK(lipschitz_estimate(kUnit, RadiationProfile{}) ==
              doctest::Approx(3.75).epsilon(1e-14));
    }
    SUBCASE("monotone in the radiation strength") {
        auto weak = RadiationProfile(
            {ProfileComponent{ProfileTarget::V0, ProfileKind::PolySpline, 4.0, 2.0, 0.01}});
        auto strong = RadiationProfile(
            {ProfileComponent{ProfileTarget::V0, ProfileKind::PolySpline, 4.0, 2.0, 0.02}});
        CHECK(lipschitz_estimate(kUnit, RadiationProfile{}) <
              lipschitz_estimate(kUnit, weak));
        CHECK(lipschitz_estimate(kUnit, weak) < lipschitz_estimate(kUnit, strong));
    }
    SUBCASE("smallness is a precondition") {
        auto big = RadiationProfile(
            {ProfileComponent{ProfileTarget::V0, ProfileKind::PolySpline, 0.0, 1.0, 1.5}});
        CHECK_THROWS_AS(lipschitz_estimate(kUnit, big), SmallnessViolation);
    }
}

TEST_CASE("contraction certificate on random admissible pairs") {
    oracles::Rng rng(777u);
    auto p = gentle();
    const double L = lipschitz_estimate(kUnit, p);
    const double gamma = 2.0 * L;
    const CurveSpaceSpec spec = make_curve_space(kUnit, p, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
        const SampledCurve q1 = random_admissible(rng, 8.0, 1025, spec.k_vec);
        const SampledCurve q2 = random_admissible(rng, 8.0, 1025, spec.k_vec);
        const double before = weighted_distance(q1, q2, gamma);
        const double after =
            weighted_distance(picard_map(kUnit, p, q1), picard_map(kUnit, p, q2), gamma);
        CHECK(after <= (L / gamma) * before * (1.0 + 1e-6));
    }
}

TEST_CASE("fixed point solve") {
    SUBCASE("stationary solution in at most two iterations") {
        const CurveSpaceSpec spec = make_curve_space(kUnit, RadiationProfile{}, 10.0);
        const auto [q, rep] =
            solve_fixed_point(kUnit, RadiationProfile{}, spec, 1025, 1e-9, 40);
        CHECK(rep.iterations <= 2);
        for (std::size_t i = 0; i < q.nodes(); i += 128)
            CHECK(q[i][2] == doctest::Approx(0.5 * q.time_at(i)).epsilon(1e-13));
    }
    SUBCASE("radiation: certified geometric convergence matching the ODE route") {
        auto p = gentle();
        const CurveSpaceSpec spec = make_curve_space(kUnit, p, 20.0);
        const auto [q, rep] = solve_fixed_point(kUnit, p, spec, 4096, 1e-9, 40);
        CHECK(rep.iterations <= 40);
        CHECK(rep.final_residual <= 1e-9);
        for (double r : rep.observed_ratios) CHECK(r <= rep.ratio_bound + 0.05);

        const Trajectory traj = integrate(kUnit, p, 20.0);
        double sup = 0.0;
        for (std::size_t i = 0; i < q.nodes(); ++i) {
            const ReducedState s = traj.state(q.time_at(i));
            sup = std::max({sup, std::fabs(q[i][0] - s.Q), std::fabs(q[i][1] - s.p),
                            std::fabs(q[i][2] - s.W)});
        }
        CHECK(sup <= 1e-5);
    }
    SUBCASE("uniqueness probe: a different admissible start reaches the same fixed point") {
        auto p = gentle();
        const double tol = 1e-9;
        const CurveSpaceSpec spec = make_curve_space(kUnit, p, 10.0);
        const auto [q_from_zero, rep] = solve_fixed_point(kUnit, p, spec, 2049, tol, 60);

        SampledCurve q(10.0, 2049);
        for (std::size_t i = 0; i < q.nodes(); ++i) {
            const double ramp = std::min(0.1 * q.time_at(i), 0.5);
            q[i] = {ramp, ramp, ramp};
        }
        for (int it = 0; it < 60; ++it) {
            SampledCurve next = picard_map(kUnit, p, q);
            const double d = sup_distance(q, next);
            q = next;
            if (d <= tol) break;
        }
        CHECK(sup_distance(q, q_from_zero) <= 10.0 * tol);
    }
    SUBCASE("iterates form a Cauchy sequence with a Lipschitz limit") {
        auto p = gentle();
        const CurveSpaceSpec spec = make_curve_space(kUnit, p, 10.0);
        SampledCurve q(10.0, 1025);
        double prev = -1.0;
        int shrinking = 0, total = 0;
        for (int it = 0; it < 25; ++it) {
            SampledCurve next = picard_map(kUnit, p, q);
            const double d = weighted_distance(q, next, spec.gamma);
            if (prev >= 0.0 && d <= prev) ++shrinking;
            if (prev >= 0.0) ++total;
            prev = d;
            q = next;
        }
        CHECK(shrinking == total);  // contraction makes every step shrink
        const auto k = q.lipschitz_constants();
        CHECK(k[0] <= spec.k_vec[0] * (1.0 + 1e-9));
        CHECK(k[1] <= spec.k_vec[1] * (1.0 + 1e-9));
        CHECK(k[2] <= spec.k_vec[2] * (1.0 + 1e-9));
    }
    SUBCASE("gamma below the Lipschitz estimate is rejected") {
        auto p = gentle();
        CurveSpaceSpec spec = make_curve_space(kUnit, p, 10.0);
        spec.gamma = 0.5 * lipschitz_estimate(kUnit, p);
        CHECK_THROWS_AS(solve_fixed_point(kUnit, p, spec, 257, 1e-9, 40),
                        std::invalid_argument);
    }
    SUBCASE("iteration cap raises with the report attached") {
        auto p = gentle();
        const CurveSpaceSpec spec = make_curve_space(kUnit, p, 10.0);
        try {
            solve_fixed_point(kUnit, p, spec, 257, 1e-300, 3);
            FAIL("expected MaxIterExceeded");
        } catch (const MaxIterExceeded& e) {
            CHECK(e.report.iterations == 3);
            CHECK(e.report.final_residual > 1e-300);
        }
    }
}
