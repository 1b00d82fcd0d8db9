#include "scalar1d/conservation.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"
#include "scalar1d/errors.hpp"

namespace scalar1d {
namespace {

constexpr double kSplitNudge = 1e-10;  // keep quadrature panels clear of kinks

// Bisect an increasing function for its root in [lo, hi]; assumes a sign change.
template <class F>
double bisect_increasing(const F& f, double lo, double hi) {
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Integrate f over [a, b] split at interior kink points, nudging panel
// endpoints off the kinks. The omitted slivers cost O(nudge) * sup|f|.
template <class F>
double integrate_split(const F& f, double a, double b, std::vector<double> splits,
                       double tol) {
    splits.push_back(a);
    splits.push_back(b);
    std::sort(splits.begin(), splits.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
        double lo = splits[i], hi = splits[i + 1];
        if (i > 0) lo += kSplitNudge;
        if (i + 2 < splits.size()) hi -= kSplitNudge;
        if (hi <= lo) continue;
        total += detail::adaptive_simpson(f, lo, hi, tol);
    }
    return total;
}

}  // namespace

EnergyTensor energy_tensor(const FieldGradient& grad) {
    EnergyTensor T;
    T.T00 = 0.5 * (grad.d0 * grad.d0 + grad.d1 * grad.d1);
    T.T11 = T.T00;
    T.T01 = -grad.d0 * grad.d1;
    return T;
}

ConservationReport tube_flux(const SourceField& field, double t1, double t2, double epsilon,
                             double quad_tol) {
    const Trajectory& traj = field.trajectory();
    if (!(0.0 <= t1 && t1 < t2 && t2 <= traj.end_time() + 1e-12))
        throw OutOfRange("tube_flux window outside trajectory");
    if (!(epsilon > kTubeGuard))
        throw EpsilonTooSmall("epsilon must exceed the tube guard " +
                              std::to_string(kTubeGuard));

    ConservationReport rep;
    rep.epsilon = epsilon;
    rep.t1 = t1;
    rep.t2 = t2;

    // Particle momentum change: p^0 = m u0, p^1 = p.
    const Kinematics k1 = traj.kin(t1), k2 = traj.kin(t2);
    const ReducedState s1 = traj.state(t1), s2 = traj.state(t2);
    rep.delta_p = {k2.m * k2.u0 - k1.m * k1.u0, s2.p - s1.p};

    // Time-like faces, parameterized by coordinate time (dS = dtau = dt / u0),
    // outward normals +-n with n = (-u1, u0). The faces cross the initial
    // light cone where x = Q(t) +- eps meets x = +- t; the integrand has a
    // kink there, so the quadrature is split at the crossing.
    for (int face = 0; face < 2; ++face) {
        const double sign = face == 0 ? -1.0 : 1.0;  // left/right offset
        auto w = [&](double t) {
            const double x = traj.state(t).Q + sign * epsilon;
            return sign > 0 ? (t - x) : (t + x);
        };
        std::vector<double> splits;
        if (w(t1) < 0.0 && w(t2) > 0.0) splits.push_back(bisect_increasing(w, t1, t2));
        for (int nu = 0; nu < 2; ++nu) {
            auto f = [&](double t) {
                const Kinematics k = traj.kin(t);
                const double x = traj.state(t).Q + sign * epsilon;
                const EnergyTensor T = energy_tensor(field.grad_total(t, x));
                const double nT = nu == 0 ? (-k.u1 * T.T00 + k.u0 * T.T01)
                                          : (-k.u1 * T.T01 + k.u0 * T.T11);
                return nT / k.u0;
            };
            const double val = sign * integrate_split(f, t1, t2, splits, quad_tol);
            (face == 0 ? rep.flux_left[nu] : rep.flux_right[nu]) = val;
        }
    }

    // Space-like caps: T^{0 nu} over [Q - eps, Q + eps], one panel per side of
    // the worldline kink, additionally split at the cone kinks x = +- t.
    auto cap_flux = [&](double t, double outward) {
        const double Q = traj.state(t).Q;
        Vec2 out{0.0, 0.0};
        const struct {
            double lo, hi;
            Side side;
        } panels[2] = {{Q - epsilon, Q, Side::Left}, {Q, Q + epsilon, Side::Right}};
        for (const auto& p : panels) {
            std::vector<double> splits;
            for (double kink : {-t, t})
                if (kink > p.lo + kKinkTol && kink < p.hi - kKinkTol) splits.push_back(kink);
            for (int nu = 0; nu < 2; ++nu) {
                auto f = [&](double x) {
                    const EnergyTensor T = energy_tensor(field.grad_total(t, x, p.side));
                    return nu == 0 ? T.T00 : T.T01;
                };
                out[nu] += outward * integrate_split(f, p.lo, p.hi, splits, quad_tol);
            }
        }
        return out;
    };
    rep.flux_cap_hi = cap_flux(t2, +1.0);
    rep.flux_cap_lo = cap_flux(t1, -1.0);

    for (int nu = 0; nu < 2; ++nu) {
        const double sides = rep.flux_left[nu] + rep.flux_right[nu];
        rep.tube_residual[nu] = rep.delta_p[nu] + sides;
        rep.residual[nu] = rep.tube_residual[nu] + rep.flux_cap_lo[nu] + rep.flux_cap_hi[nu];
    }
    return rep;
}

ConservationReport epsilon_study(const SourceField& field, double t1, double t2,
                                 const std::vector<double>& epsilons, double quad_tol) {
    if (epsilons.empty()) throw std::invalid_argument("epsilon_study needs epsilons");
    std::vector<double> eps = epsilons;
    std::sort(eps.begin(), eps.end(), std::greater<>());

    std::vector<Vec2> residuals;
    ConservationReport rep;
    for (double e : eps) {
        rep = tube_flux(field, t1, t2, e, quad_tol);
        residuals.push_back(rep.tube_residual);
    }
    for (std::size_t i = 0; i < eps.size(); ++i)
        rep.residual_vs_epsilon.emplace_back(
            eps[i], std::max(std::fabs(residuals[i][0]), std::fabs(residuals[i][1])));

    // Neville extrapolation of the tube residual to eps = 0, component-wise.
    for (int nu = 0; nu < 2; ++nu) {
        std::vector<double> T(eps.size());
        for (std::size_t i = 0; i < eps.size(); ++i) T[i] = residuals[i][nu];
        for (std::size_t j = 1; j < eps.size(); ++j)
            for (std::size_t i = eps.size() - 1; i >= j; --i)
                T[i] = (eps[i] * T[i - 1] - eps[i - j] * T[i]) / (eps[i] - eps[i - j]);
        rep.extrapolated_residual[nu] = T[eps.size() - 1];
    }

    if (eps.size() >= 2) {
        const auto n = eps.size();
        const double r1 = rep.residual_vs_epsilon[n - 2].second;
        const double r2 = rep.residual_vs_epsilon[n - 1].second;
        if (r1 > 0.0 && r2 > 0.0 && eps[n - 2] != eps[n - 1])
            rep.measured_rate = std::log(r1 / r2) / std::log(eps[n - 2] / eps[n - 1]);
    }
    return rep;
}

Vec2 force_from_jump(const SourceField& field, double t) {
    const Kinematics k = field.trajectory().kin(t);
    const WorldlineJump j = field.worldline_jump(t);
    const EnergyTensor TR = energy_tensor(j.right);
    const EnergyTensor TL = energy_tensor(j.left);
    const double jump_nT0 = (-k.u1 * TR.T00 + k.u0 * TR.T01) - (-k.u1 * TL.T00 + k.u0 * TL.T01);
    const double jump_nT1 = (-k.u1 * TR.T01 + k.u0 * TR.T11) - (-k.u1 * TL.T01 + k.u0 * TL.T11);
    return {-jump_nT0, -jump_nT1};
}

Vec2 force_closed_form(const Trajectory& traj, double t) {
    const Kinematics k = traj.kin(t);
    const ReducedState s = traj.state(t);
    const double a = traj.params().charge;
    const FieldGradient gv = eval_grad_V(traj.profile(), t, s.Q);
    return {-0.5 * a * a * (k.u0 - 1.0) - a * gv.d0, -0.5 * a * a * k.u1 + a * gv.d1};
}

}  // namespace scalar1d
