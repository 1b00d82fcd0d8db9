#include "scalar1d/source_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"
#include "scalar1d/errors.hpp"

namespace scalar1d {
namespace {

constexpr double kGradStep = 1e-5;   // base finite-difference step h_grad
constexpr double kRootTol = 1e-12;   // bisection tolerance for the cone root

}  // namespace

SourceField::SourceField(const Trajectory& traj) : traj_(traj) {
    const auto& ts = traj.times();
    cum_.resize(ts.size());
    cum_[0] = 0.0;
    auto integrand = [&](double s) {
        const Kinematics k = traj_.kin(s);
        return std::sqrt(std::max(0.0, 1.0 - k.v * k.v));
    };
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        cum_[i + 1] = cum_[i] + detail::gauss16(integrand, ts[i], ts[i + 1]);
}

void SourceField::check_time(double t) const {
    if (!(t >= 0.0) || t > traj_.end_time() + 1e-12)
        throw OutOfRange("field evaluation time " + std::to_string(t) +
                         " outside trajectory range");
}

double SourceField::proper_time_integral(double s) const {
    const auto& ts = traj_.times();
    s = std::clamp(s, 0.0, ts.back());
    auto it = std::upper_bound(ts.begin(), ts.end(), s);
    std::size_t i = (it == ts.begin()) ? 0 : static_cast<std::size_t>(it - ts.begin() - 1);
    if (i >= ts.size() - 1) i = ts.size() - 2;
    auto integrand = [&](double u) {
        const Kinematics k = traj_.kin(u);
        return std::sqrt(std::max(0.0, 1.0 - k.v * k.v));
    };
    return cum_[i] + detail::gauss16(integrand, ts[i], s);
}

double SourceField::support_root(double t, double x) const {
    auto g = [&](double s) { return (t - s) - std::fabs(x - traj_.state(s).Q); };
    if (g(0.0) < 0.0) return -1.0;  // point outside the initial light cone
    if (g(t) >= 0.0) return t;      // on the worldline
    // g is strictly decreasing (|v| < 1). Bracket by bisection, then polish
    // with Newton using the analytic slope -1 + sgn(x - Q) v, so the root is a
    // smooth function of (t, x) down to machine precision.
    double lo = 0.0, hi = t;
    for (int i = 0; i < 24 && hi - lo > 1e-6; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    double step = hi - lo;
    for (int i = 0; i < 6; ++i) {
        const double sgn = (x >= traj_.state(s).Q) ? 1.0 : -1.0;
        const double gp = -1.0 + sgn * traj_.kin(s).v;
        const double delta = g(s) / gp;
        s -= delta;
        step = std::fabs(delta);
        if (step < 1e-15 * std::max(1.0, t)) break;
    }
    if (s >= lo - 1e-5 && s <= hi + 1e-5 && step < 1e-9)
        return std::clamp(s, 0.0, t);
    while (hi - lo > kRootTol) {  // robust fallback
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double SourceField::u_source(double t, double x) const {
    check_time(t);
    if (t == 0.0) return 0.0;
    if (std::fabs(x) >= t) return 0.0;  // support is exactly [-t, t]
    const double s = support_root(t, x);
    if (s < 0.0) return 0.0;
    return 0.5 * traj_.params().charge * proper_time_integral(s);
}

FieldGradient SourceField::grad_source(double t, double x, std::optional<Side> side) const {
    check_time(t);
    if (side && *side == Side::Away) side.reset();
    FieldGradient g;
    g.side = Side::Away;

    // Exactly zero outside the light cone.
    if (x >= t + kKinkTol || x <= -t - kKinkTol || t <= kKinkTol) return g;

    const double Q = traj_.state(t).Q;
    const double dist = std::fabs(x - Q);
    const bool near_worldline = dist <= kTubeGuard;
    double sgn;  // which side of the worldline the stencil lives on
    if (dist <= kKinkTol) {
        if (!side || *side == Side::Away)
            throw std::invalid_argument("grad_source on the worldline requires a side");
        sgn = (*side == Side::Right) ? 1.0 : -1.0;
    } else {
        sgn = (x > Q) ? 1.0 : -1.0;
        if (near_worldline && side && *side != Side::Away) {
            const double requested = (*side == Side::Right) ? 1.0 : -1.0;
            if (requested != sgn)
                throw std::invalid_argument("requested side contradicts evaluation point");
        } else if (near_worldline && !side) {
            throw std::invalid_argument("grad_source within the tube guard requires a side");
        }
    }
    if (near_worldline) g.side = (sgn > 0.0) ? Side::Right : Side::Left;

    const double h = near_worldline ? std::min(kGradStep, std::max(dist, 4.0 * kGradStep) / 4.0)
                                    : kGradStep;

    // Spatial derivative. One-sided away from the worldline inside the guard,
    // one-sided away from a cone edge when within reach of one, else central.
    const double edge_hi = t - x;  // distance to the x = +t edge
    const double edge_lo = x + t;  // distance to the x = -t edge
    auto f_x = [&](double xx) { return u_source(t, xx); };
    if (near_worldline) {
        g.d1 = (-3.0 * f_x(x) + 4.0 * f_x(x + sgn * h) - f_x(x + 2.0 * sgn * h)) / (2.0 * sgn * h);
    } else if (edge_hi < 4.0 * h) {
        g.d1 = (-3.0 * f_x(x) + 4.0 * f_x(x - h) - f_x(x - 2.0 * h)) / (-2.0 * h);
    } else if (edge_lo < 4.0 * h) {
        g.d1 = (-3.0 * f_x(x) + 4.0 * f_x(x + h) - f_x(x + 2.0 * h)) / (2.0 * h);
    } else {
        g.d1 = (f_x(x + h) - f_x(x - h)) / (2.0 * h);
    }

    // Time derivative. The worldline kink moves slower than light, so a step
    // capped at dist/4 cannot cross it; cone edge and trajectory end force
    // one-sided stencils.
    const double ht = near_worldline ? std::min(kGradStep, std::max(dist, 4.0 * kGradStep) / 4.0)
                                     : kGradStep;
    auto f_t = [&](double tt) { return u_source(tt, x); };
    const double cone_margin = t - std::fabs(x);
    const double end_margin = traj_.end_time() - t;
    if (cone_margin < 4.0 * ht && end_margin >= 2.0 * ht) {
        g.d0 = (-3.0 * f_t(t) + 4.0 * f_t(t + ht) - f_t(t + 2.0 * ht)) / (2.0 * ht);
    } else if (end_margin < ht) {
        g.d0 = (-3.0 * f_t(t) + 4.0 * f_t(t - ht) - f_t(t - 2.0 * ht)) / (-2.0 * ht);
    } else {
        g.d0 = (f_t(t + ht) - f_t(t - ht)) / (2.0 * ht);
    }
    return g;
}

double SourceField::u_total(double t, double x) const {
    check_time(t);
    const double a = traj_.params().charge;
    return eval_V(traj_.profile(), t, x) + eval_U_stat(a, t, x) + u_source(t, x);
}

FieldGradient SourceField::grad_total(double t, double x, std::optional<Side> side) const {
    check_time(t);
    const double a = traj_.params().charge;
    const auto& profile = traj_.profile();

    // At t = 0 the data give the gradients in closed form: d0 U = V1,
    // d1 U = V0' - (a/2) sgn(x), with the kink at the particle position.
    if (t == 0.0) {
        FieldGradient g;
        double sgn;
        if (std::fabs(x) <= kKinkTol) {
            if (!side || *side == Side::Away)
                throw std::invalid_argument("initial-time gradient at x=0 requires a side");
            sgn = (*side == Side::Right) ? 1.0 : -1.0;
            g.side = *side;
        } else {
            sgn = (x > 0.0) ? 1.0 : -1.0;
            g.side = (std::fabs(x) <= kTubeGuard) ? (sgn > 0 ? Side::Right : Side::Left)
                                                  : Side::Away;
        }
        g.d0 = profile.value(ProfileTarget::V1, x);
        g.d1 = profile.derivative(ProfileTarget::V0, x) - 0.5 * a * sgn;
        return g;
    }

    const FieldGradient gv = eval_grad_V(profile, t, x);
    const FieldGradient gs = eval_grad_U_stat(a, t, x, side);
    const FieldGradient gq = grad_source(t, x, side);
    FieldGradient g;
    g.d0 = gv.d0 + gs.d0 + gq.d0;
    g.d1 = gv.d1 + gs.d1 + gq.d1;
    g.side = gq.side;
    return g;
}

FieldSample SourceField::sample(double t, double x, std::optional<Side> side) const {
    FieldSample s;
    s.t = t;
    s.x = x;
    s.U = u_total(t, x);
    s.grad = grad_total(t, x, side);
    return s;
}

WorldlineJump SourceField::worldline_jump(double t) const {
    check_time(t);
    if (!(t > 0.0)) throw OutOfRange("worldline_jump requires t > 0");
    const double Q = traj_.state(t).Q;
    constexpr double h = 1e-4;

    auto one_side = [&](Side side) {
        const double sgn = (side == Side::Right) ? 1.0 : -1.0;
        FieldGradient at[3];
        const double offs[3] = {h, 2.0 * h, 4.0 * h};
        for (int i = 0; i < 3; ++i) at[i] = grad_total(t, Q + sgn * offs[i], side);
        // F(eps) = F0 + c1 eps + c2 eps^2 + ...  =>  F0 = (8 F(h) - 6 F(2h) + F(4h)) / 3
        FieldGradient out;
        out.d0 = (8.0 * at[0].d0 - 6.0 * at[1].d0 + at[2].d0) / 3.0;
        out.d1 = (8.0 * at[0].d1 - 6.0 * at[1].d1 + at[2].d1) / 3.0;
        out.side = side;
        return out;
    };

    WorldlineJump j;
    j.left = one_side(Side::Left);
    j.right = one_side(Side::Right);
    j.jump_d0 = j.right.d0 - j.left.d0;
    j.jump_d1 = j.right.d1 - j.left.d1;
    return j;
}

}  // namespace scalar1d
