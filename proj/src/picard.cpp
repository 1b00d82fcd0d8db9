#include "scalar1d/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalar1d/errors.hpp"
#include "scalar1d/free_field.hpp"

namespace scalar1d {

SampledCurve::SampledCurve(double horizon, std::size_t nodes)
    : horizon_(horizon), n_(nodes), vals_(nodes, {0.0, 0.0, 0.0}) {
    if (!(horizon > 0.0) || nodes < 2)
        throw std::invalid_argument("curve needs horizon > 0 and at least 2 nodes");
}

std::array<double, 3> SampledCurve::eval(double t) const {
    if (t <= 0.0) return vals_.front();
    if (t >= horizon_) return vals_.back();
    const double s = t / horizon_ * static_cast<double>(n_ - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(s), n_ - 2);
    const double w = s - static_cast<double>(i);
    std::array<double, 3> out;
    for (int c = 0; c < 3; ++c) out[c] = (1.0 - w) * vals_[i][c] + w * vals_[i + 1][c];
    return out;
}

std::array<double, 3> SampledCurve::lipschitz_constants() const {
    const double h = horizon_ / static_cast<double>(n_ - 1);
    std::array<double, 3> k = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i + 1 < n_; ++i)
        for (int c = 0; c < 3; ++c)
            k[c] = std::max(k[c], std::fabs(vals_[i + 1][c] - vals_[i][c]) / h);
    return k;
}

double weighted_distance(const SampledCurve& q1, const SampledCurve& q2, double gamma) {
    if (!q1.same_grid(q2)) throw GridMismatch("weighted_distance: curves on different grids");
    double d = 0.0;
    for (std::size_t i = 0; i < q1.nodes(); ++i) {
        const double t = q1.time_at(i);
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double dv = q2[i][c] - q1[i][c];
            s += dv * dv;
        }
        d = std::max(d, std::exp(-gamma * t) * std::sqrt(s));
    }
    return d;
}

double sup_distance(const SampledCurve& q1, const SampledCurve& q2) {
    return weighted_distance(q1, q2, 0.0);
}

SampledCurve picard_map(const ParticleParams& params, const RadiationProfile& profile,
                        const SampledCurve& q) {
    const std::size_t n = q.nodes();
    const double h = q.horizon() / static_cast<double>(n - 1);
    SampledCurve out(q.horizon(), n);

    std::array<double, 3> prev_f =
        rhs(params, profile, {0.0, q[0][0], q[0][1], q[0][2]});
    out[0] = {0.0, 0.0, 0.0};
    for (std::size_t i = 1; i < n; ++i) {
        const double t = q.time_at(i);
        const std::array<double, 3> fi = rhs(params, profile, {t, q[i][0], q[i][1], q[i][2]});
        for (int c = 0; c < 3; ++c) out[i][c] = out[i - 1][c] + 0.5 * h * (prev_f[c] + fi[c]);
        prev_f = fi;
    }
    return out;
}

double lipschitz_estimate(const ParticleParams& params, const RadiationProfile& profile) {
    const SmallnessReport small = smallness_check(params, profile);
    if (!small.ok) throw SmallnessViolation(small.m_V);
    const ProfileNorms n = profile.norms();
    const double a = std::fabs(params.charge);
    const double K = force_bound(params, n);
    const double Kp = n.lip_d1V;  // Lipschitz constant of d1V
    const double alpha = 1.0 / small.m_V;

    // Bounds M[i][j] >= |d f_j / d q_i| on the admissible class, with the
    // crude uniform estimates |d(p/r)/dm|, |d(p/r)/dp|, |d(m/r)/dm|,
    // |d(m/r)/dp| <= 1/m_V, |dm/dQ| <= K, |dm/dW| = |a|. The (Q, p) entry is
    // the worst one: (a^2/2) K/m_V + K^2/m_V + |a| K'.
    const double half_a2 = 0.5 * a * a;
    const double row_common = 1.0 + half_a2 + K + 0.5 * a;  // sum over the 3 components
    const double R1 = K * alpha * row_common + a * Kp;
    const double R2 = alpha * row_common;
    const double R3 = a * alpha * row_common;
    return std::sqrt(R1 * R1 + R2 * R2 + R3 * R3);
}

CurveSpaceSpec make_curve_space(const ParticleParams& params, const RadiationProfile& profile,
                                double horizon, double gamma_factor) {
    CurveSpaceSpec spec;
    spec.horizon = horizon;
    spec.gamma = gamma_factor * lipschitz_estimate(params, profile);
    spec.k_vec = {1.0, force_bound(params, profile.norms()), 0.5 * std::fabs(params.charge)};
    return spec;
}

std::pair<SampledCurve, ContractionReport> solve_fixed_point(
    const ParticleParams& params, const RadiationProfile& profile,
    const CurveSpaceSpec& spec, std::size_t grid_nodes, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    ContractionReport rep;
    rep.L_est = lipschitz_estimate(params, profile);
    rep.gamma = spec.gamma;
    rep.ratio_bound = rep.L_est / spec.gamma;
    if (!(spec.gamma > rep.L_est))
        throw std::invalid_argument("curve space gamma must exceed the Lipschitz estimate");

    SampledCurve q(spec.horizon, grid_nodes);
    double prev_d = -1.0;
    for (int it = 1; it <= max_iter; ++it) {
        SampledCurve next = picard_map(params, profile, q);
        const double d = weighted_distance(q, next, spec.gamma);
        const double ds = sup_distance(q, next);
        // The weighted distance bottoms out at roundoff long before the sup
        // criterion is met (the weight crushes late times); ratios are only
        // contraction evidence while the distance is above that floor.
        double floor = 0.0;
        for (std::size_t i = 0; i < q.nodes(); ++i) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += q[i][c] * q[i][c];
            floor = std::max(floor, std::exp(-spec.gamma * q.time_at(i)) * std::sqrt(s));
        }
        floor *= 1e-13;
        if (prev_d > floor) rep.observed_ratios.push_back(d / prev_d);
        prev_d = d;
        rep.iterations = it;
        rep.final_residual = d;
        rep.final_sup_residual = ds;
        q = std::move(next);
        if (d <= tol && ds <= tol) return {std::move(q), std::move(rep)};
    }
    throw MaxIterExceeded(std::move(rep));
}

}  // namespace scalar1d
