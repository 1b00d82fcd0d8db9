#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "scalar1d/errors.hpp"
#include "scalar1d/source_field.hpp"

using namespace scalar1d;

namespace {

const ParticleParams kUnit{1.0, 1.0};

RadiationProfile gentle() {
    return RadiationProfile(
        {ProfileComponent{ProfileTarget::V0, ProfileKind::PolySpline, 4.0, 2.0, 0.02}});
}

RadiationProfile kick_profile() {
    return RadiationProfile(
        {ProfileComponent{ProfileTarget::V1, ProfileKind::PolySpline, 2.5, 0.75, 1.2}});
}

// Least-squares fit of U(t, Q + d) = c0 + c1 d + c2 |d| on symmetric offsets,
// isolating the kink strength c2 without assuming anything about it.
std::array<double, 3> fit_kink(const SourceField& field, double t, double Q, double h) {
    std::vector<std::array<double, 3>> rows;
    std::vector<double> rhs;
    for (int k = 1; k <= 6; ++k)
        for (double sgn : {-1.0, 1.0}) {
            const double d = sgn * k * h;
            rows.push_back({1.0, d, std::fabs(d)});
            rhs.push_back(field.u_total(t, Q + d));
        }
    // normal equations, 3x3
    double A[3][3] = {}, b[3] = {};
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int i = 0; i < 3; ++i) {
            b[i] += rows[r][i] * rhs[r];
            for (int j = 0; j < 3; ++j) A[i][j] += rows[r][i] * rows[r][j];
        }
    // gaussian elimination
    for (int i = 0; i < 3; ++i) {
        int piv = i;
        for (int r = i + 1; r < 3; ++r)
            if (std::fabs(A[r][i]) > std::fabs(A[piv][i])) piv = r;
        std::swap(A[i], A[piv]);
        std::swap(b[i], b[piv]);
        for (int r = i + 1; r < 3; ++r) {
            const double f = A[r][i] / A[i][i];
            for (int c = i; c < 3; ++c) A[r][c] -= f * A[i][c];
            b[r] -= f * b[i];
        }
    }
    std::array<double, 3> out{};
    for (int i = 2; i >= 0; --i) {
        double s = b[i];
        for (int c = i + 1; c < 3; ++c) s -= A[i][c] * out[c];
        out[i] = s / A[i][i];
    }
    return out;
}

}  // namespace

TEST_CASE("stationary source field has the closed cone form") {
    const Trajectory traj = integrate(kUnit, RadiationProfile{}, 10.0);
    const SourceField field(traj);
    SUBCASE("inside the cone") {
        for (double t : {1.0, 4.0, 9.0})
            for (double x : {-0.9 * t, -0.2, 0.0, 0.5 * t}) {
                const double expect = 0.5 * (t - std::fabs(x));
                CHECK(field.u_source(t, x) == doctest::Approx(expect).epsilon(1e-10));
            }
    }
    SUBCASE("identically zero outside") {
        CHECK(field.u_source(2.0, 2.5) == 0.0);
        CHECK(field.u_source(2.0, -7.0) == 0.0);
    }
    SUBCASE("static superposition on a grid") {
        for (int i = 0; i < 100; ++i)
            for (int j = 0; j < 100; ++j) {
                const double t = 0.05 + 9.9 * i / 99.0;
                const double x = -12.0 + 24.0 * j / 99.0;
                if (std::fabs(std::fabs(x) - t) < 1e-6) continue;
                CHECK(std::fabs(field.u_total(t, x) + 0.5 * std::fabs(x)) <= 1e-10);
            }
    }
}

TEST_CASE("initial slice carries the static cone plus radiation") {
    auto p = gentle();
    const Trajectory traj = integrate(kUnit, p, 5.0);
    const SourceField field(traj);
    for (double x : {-3.0, -0.5, 0.4, 3.5, 5.0}) {
        const double expect = -0.5 * std::fabs(x) + p.value(ProfileTarget::V0, x);
        CHECK(field.u_total(0.0, x) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("worldline consistency: the sourced field on the worldline is W") {
    auto p = kick_profile();
    const Trajectory traj = integrate(kUnit, p, 10.0);
    const SourceField field(traj);
    for (double t : {0.5, 2.0, 3.7, 5.5, 8.0, 9.9}) {
        const ReducedState s = traj.state(t);
        CHECK(field.u_source(t, s.Q) == doctest::Approx(s.W).epsilon(1e-8));
    }
}

TEST_CASE("proper-time rate of the sourced potential is a/2") {
    auto p = gentle();
    const Trajectory traj = integrate(kUnit, p, 12.0);
    const double h = 0.05;
    for (int i = 0; i <= 100; ++i) {
        const double t = 2.0 * h + (12.0 - 4.0 * h) * i / 100.0;
        const double dW = oracles::fd_deriv([&](double s) { return traj.state(s).W; }, t, h);
        CHECK(std::fabs(traj.kin(t).u0 * dW - 0.5) <= 1e-8);
    }
}

TEST_CASE("stationary worldline jump") {
    const Trajectory traj = integrate(kUnit, RadiationProfile{}, 10.0);
    const SourceField field(traj);
    const WorldlineJump j = field.worldline_jump(5.0);
    CHECK(j.jump_d1 == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::fabs(j.jump_d0) <= 1e-8);
    CHECK(j.left.d1 == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(j.right.d1 == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("moving-charge kink strength against a brute-force fit") {
    auto p = kick_profile();
    const Trajectory traj = integrate(kUnit, p, 12.0);
    const SourceField field(traj);
    const double a = 1.0;
    for (double t : {3.5, 4.5, 5.5}) {  // post-transit, before the self-force kills u1
        const Kinematics k = traj.kin(t);
        const double Q = traj.state(t).Q;
        REQUIRE(std::fabs(k.u1) > 0.04);

        const auto fit = fit_kink(field, t, Q, 2e-4);
        // kink coefficient c2 = -(a/2) u0 so that [d1 U] = -a u0
        CHECK(fit[2] == doctest::Approx(-0.5 * a * k.u0).epsilon(1e-4));

        const WorldlineJump j = field.worldline_jump(t);
        CHECK(j.jump_d1 == doctest::Approx(-a * k.u0).epsilon(1e-4));
        CHECK(j.jump_d0 == doctest::Approx(a * k.u1).epsilon(1e-4));

        // removing the fitted kink leaves gradients that agree across the line
        const double smooth_right = j.right.d1 - fit[2];
        const double smooth_left = j.left.d1 + fit[2];
        CHECK(smooth_right == doctest::Approx(smooth_left).epsilon(1e-4));
    }
}

TEST_CASE("total field is Lipschitz with the certified constant") {
    auto p = gentle();
    const Trajectory traj = integrate(kUnit, p, 12.0);
    const SourceField field(traj);
    const ProfileNorms n = p.norms();
    const double C = 1.0 + n.sup_d1V0 + n.sup_V1;  // |a| + sup|V0'| + sup|V1|
    oracles::Rng rng(2024u);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.uniform(0.05, 11.95);
        const double x1 = rng.uniform(-14.0, 14.0);
        const double x2 = rng.uniform(-14.0, 14.0);
        if (std::fabs(x1 - x2) < 1e-9) continue;
        const double lhs = std::fabs(field.u_total(t, x1) - field.u_total(t, x2));
        CHECK(lhs <= C * std::fabs(x1 - x2) + 1e-12);
    }
}

TEST_CASE("wave operator annihilates the total field away from kinks") {
    auto p = kick_profile();
    const Trajectory traj = integrate(kUnit, p, 10.0);
    const SourceField field(traj);
    oracles::Rng rng(606u);
    const double h = 1e-3;
    int tested = 0;
    while (tested < 300) {
        const double t = rng.uniform(0.5, 9.5);
        const double x = rng.uniform(-8.0, 8.0);
        const double Q = traj.state(t).Q;
        if (std::fabs(x - Q) < 0.1) continue;                 // worldline kink
        if (std::fabs(std::fabs(x) - t) < 0.1) continue;      // cone kinks
        ++tested;
        const double utt =
            oracles::fd_second([&](double s) { return field.u_total(s, x); }, t, h);
        const double uxx =
            oracles::fd_second([&](double y) { return field.u_total(t, y); }, x, h);
        CHECK(std::fabs(utt - uxx) <= 1e-3);
    }
}

TEST_CASE("guards and errors") {
    const Trajectory traj = integrate(kUnit, RadiationProfile{}, 2.0);
    const SourceField field(traj);
    SUBCASE("time beyond the trajectory") {
        CHECK_THROWS_AS(field.u_source(2.5, 0.0), OutOfRange);
        CHECK_THROWS_AS(field.worldline_jump(2.5), OutOfRange);
    }
    SUBCASE("gradient on the worldline needs a side") {
        CHECK_THROWS_AS(field.grad_source(1.0, 0.0), std::invalid_argument);
        CHECK_NOTHROW(field.grad_source(1.0, 0.0, Side::Right));
    }
    SUBCASE("within the tube guard the side is mandatory") {
        CHECK_THROWS_AS(field.grad_source(1.0, 5e-4), std::invalid_argument);
        const FieldGradient g = field.grad_source(1.0, 5e-4, Side::Right);
        CHECK(g.side == Side::Right);
    }
    SUBCASE("requested side must match the evaluation point") {
        CHECK_THROWS_AS(field.grad_source(1.0, 5e-4, Side::Left), std::invalid_argument);
    }
}
