#include "scalar1d/worldline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "scalar1d/errors.hpp"

namespace scalar1d {

double dynamical_mass(const ParticleParams& params, const RadiationProfile& profile,
                      double t, double Q, double W) {
    assert(std::fabs(Q) <= t + 1e-9);
    const double a = params.charge;
    const double m = params.bare_mass + 0.5 * a * a * t - a * eval_V(profile, t, Q) - a * W;
    if (!(m > 0.0)) throw NonpositiveMass(m, t);
    return m;
}

Kinematics kinematics(const ParticleParams& params, const RadiationProfile& profile,
                      const ReducedState& state) {
    const double m = dynamical_mass(params, profile, state.t, state.Q, state.W);
    const double r = std::hypot(m, state.p);
    Kinematics k;
    k.m = m;
    k.v = state.p / r;
    k.u0 = r / m;
    k.u1 = state.p / m;
    return k;
}

std::array<double, 3> rhs(const ParticleParams& params, const RadiationProfile& profile,
                          const ReducedState& state, double self_force_scale) {
    const double a = params.charge;
    const double m = dynamical_mass(params, profile, state.t, state.Q, state.W);
    const double r = std::hypot(m, state.p);
    const double d1V = profile.empty() ? 0.0 : eval_grad_V(profile, state.t, state.Q).d1;
    return {state.p / r,
            -self_force_scale * 0.5 * a * a * state.p / r + a * (m / r) * d1V,
            0.5 * a * m / r};
}

double force_bound(const ParticleParams& params, const ProfileNorms& norms) {
    const double a = params.charge;
    return 0.5 * a * a + std::fabs(a) * (norms.sup_d1V0 + norms.sup_V1);
}

Trajectory::Trajectory(ParticleParams params, RadiationProfile profile,
                       std::vector<double> ts, std::vector<std::array<double, 3>> ys,
                       std::vector<std::array<double, 3>> fs, double interp_error_bound)
    : params_(std::move(params)),
      profile_(std::move(profile)),
      ts_(std::move(ts)),
      ys_(std::move(ys)),
      fs_(std::move(fs)),
      interp_err_(interp_error_bound) {
    if (ts_.size() < 2 || ts_.size() != ys_.size() || ts_.size() != fs_.size())
        throw std::invalid_argument("trajectory needs matching node arrays");
}

ReducedState Trajectory::node(std::size_t i) const {
    return {ts_[i], ys_[i][0], ys_[i][1], ys_[i][2]};
}

ReducedState Trajectory::state(double t) const {
    if (!(t >= ts_.front() - 1e-12 && t <= ts_.back() + 1e-12))
        throw OutOfRange("time " + std::to_string(t) + " outside trajectory [0, " +
                         std::to_string(ts_.back()) + "]");
    t = std::clamp(t, ts_.front(), ts_.back());
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t i = (it == ts_.begin()) ? 0 : static_cast<std::size_t>(it - ts_.begin() - 1);
    if (i >= ts_.size() - 1) i = ts_.size() - 2;

    const double h = ts_[i + 1] - ts_[i];
    const double s = (t - ts_[i]) / h;
    // cubic Hermite basis
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    ReducedState st;
    st.t = t;
    double* out[3] = {&st.Q, &st.p, &st.W};
    for (int c = 0; c < 3; ++c)
        *out[c] = h00 * ys_[i][c] + h10 * h * fs_[i][c] + h01 * ys_[i + 1][c] +
                  h11 * h * fs_[i + 1][c];
    return st;
}

Trajectory integrate(const ParticleParams& params, const RadiationProfile& profile,
                     double t_end, const StepControl& ctrl) {
    params.validate();
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    const SmallnessReport small = smallness_check(params, profile);
    if (!small.ok) throw SmallnessViolation(small.m_V);

    // Dormand-Prince 5(4) coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto f = [&](double t, const std::array<double, 3>& y) {
        return rhs(params, profile, {t, y[0], y[1], y[2]}, ctrl.self_force_scale);
    };

    std::vector<double> ts{0.0};
    std::vector<std::array<double, 3>> ys{{0.0, 0.0, 0.0}};
    std::vector<std::array<double, 3>> fs{f(0.0, ys[0])};

    double t = 0.0;
    std::array<double, 3> y = ys[0];
    std::array<double, 3> k1 = fs[0];
    double h_ctrl = std::min(ctrl.max_step, t_end / 16.0);
    const double h_floor = 1e-14 * t_end;

    while (t < t_end) {
        // Underflow is judged on the controller's step, not the end clip.
        if (h_ctrl < h_floor) throw StepUnderflow(h_ctrl, t);
        const bool last = h_ctrl >= t_end - t;
        const double h = last ? (t_end - t) : h_ctrl;

        std::array<double, 3> k2, k3, k4, k5, k6, k7, ynew;
        auto stage = [&](double frac, const std::array<double, 3>& incr) {
            std::array<double, 3> yt;
            for (int i = 0; i < 3; ++i) yt[i] = y[i] + h * incr[i];
            return f(t + frac * h, yt);
        };
        k2 = stage(c2, {a21 * k1[0], a21 * k1[1], a21 * k1[2]});
        k3 = stage(c3, {a31 * k1[0] + a32 * k2[0], a31 * k1[1] + a32 * k2[1],
                        a31 * k1[2] + a32 * k2[2]});
        k4 = stage(c4, {a41 * k1[0] + a42 * k2[0] + a43 * k3[0],
                        a41 * k1[1] + a42 * k2[1] + a43 * k3[1],
                        a41 * k1[2] + a42 * k2[2] + a43 * k3[2]});
        k5 = stage(c5, {a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0],
                        a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1],
                        a51 * k1[2] + a52 * k2[2] + a53 * k3[2] + a54 * k4[2]});
        k6 = stage(1.0, {a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0],
                         a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1],
                         a61 * k1[2] + a62 * k2[2] + a63 * k3[2] + a64 * k4[2] + a65 * k5[2]});
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(t + h, ynew);  // FSAL

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc =
                ctrl.abs_tol + ctrl.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 3.0);

        if (err <= 1.0) {
            t = last ? t_end : t + h;
            y = ynew;
            k1 = k7;
            ts.push_back(t);
            ys.push_back(y);
            fs.push_back(k1);
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h_ctrl = h * std::clamp(fac, 0.2, 5.0);
        h_ctrl = std::min(h_ctrl, ctrl.max_step);
    }

    // Interpolation error proxy: cubic Hermite on a step is off by
    // h^4 |y''''| / 384; estimate y'''' from third divided differences of f.
    double interp = 0.0;
    for (std::size_t i = 0; i + 3 < ts.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            const double d01 = (fs[i + 1][c] - fs[i][c]) / (ts[i + 1] - ts[i]);
            const double d12 = (fs[i + 2][c] - fs[i + 1][c]) / (ts[i + 2] - ts[i + 1]);
            const double d23 = (fs[i + 3][c] - fs[i + 2][c]) / (ts[i + 3] - ts[i + 2]);
            const double dd0 = (d12 - d01) / (ts[i + 2] - ts[i]);
            const double dd1 = (d23 - d12) / (ts[i + 3] - ts[i + 1]);
            const double y4 = 6.0 * (dd1 - dd0) / (ts[i + 3] - ts[i]);
            const double hmax = std::max({ts[i + 1] - ts[i], ts[i + 2] - ts[i + 1],
                                          ts[i + 3] - ts[i + 2]});
            interp = std::max(interp, std::pow(hmax, 4) * std::fabs(y4) / 384.0);
        }
    }

    return Trajectory(params, profile, std::move(ts), std::move(ys), std::move(fs), interp);
}

}  // namespace scalar1d
