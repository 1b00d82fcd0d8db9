#include "scalar1d/free_field.hpp"

#include <cmath>
#include <stdexcept>

namespace scalar1d {
namespace {

void require_nonnegative_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("free field requires t >= 0");
}

// sign of y with one-sided resolution on the kink
double sgn_sided(double y, std::optional<Side> side) {
    if (y > kKinkTol) return 1.0;
    if (y < -kKinkTol) return -1.0;
    if (!side || *side == Side::Away)
        throw std::invalid_argument("gradient on a kink locus requires an explicit side");
    return *side == Side::Right ? 1.0 : -1.0;
}

}  // namespace

double eval_V(const RadiationProfile& profile, double t, double x) {
    require_nonnegative_time(t);
    if (profile.empty()) return 0.0;
    const double vp = profile.value(ProfileTarget::V0, x + t);
    const double vm = profile.value(ProfileTarget::V0, x - t);
    const double ap = profile.antiderivative(ProfileTarget::V1, x + t);
    const double am = profile.antiderivative(ProfileTarget::V1, x - t);
    return 0.5 * (vp + vm) + 0.5 * (ap - am);
}

FieldGradient eval_grad_V(const RadiationProfile& profile, double t, double x) {
    require_nonnegative_time(t);
    FieldGradient g;
    g.side = Side::Away;
    if (profile.empty()) return g;
    const double dp = profile.derivative(ProfileTarget::V0, x + t);
    const double dm = profile.derivative(ProfileTarget::V0, x - t);
    const double wp = profile.value(ProfileTarget::V1, x + t);
    const double wm = profile.value(ProfileTarget::V1, x - t);
    g.d1 = 0.5 * (dp + dm + wp - wm);
    g.d0 = 0.5 * (dp - dm + wp + wm);
    return g;
}

double eval_U_stat(double a, double t, double x) {
    require_nonnegative_time(t);
    return -0.25 * a * (std::fabs(x + t) + std::fabs(x - t));
}

FieldGradient eval_grad_U_stat(double a, double t, double x, std::optional<Side> side) {
    require_nonnegative_time(t);
    FieldGradient g;
    const bool on_kink =
        std::fabs(x + t) <= kKinkTol || std::fabs(x - t) <= kKinkTol;
    const double sp = sgn_sided(x + t, side);
    const double sm = sgn_sided(x - t, side);
    g.d1 = -0.25 * a * (sp + sm);
    g.d0 = -0.25 * a * (sp - sm);
    g.side = on_kink ? side.value_or(Side::Away) : Side::Away;
    return g;
}

SmallnessReport smallness_check(const ParticleParams& params, const RadiationProfile& profile) {
    const ProfileNorms n = profile.norms();
    SmallnessReport r;
    r.m_V = params.bare_mass - std::fabs(params.charge) * (n.sup_V0 + 0.5 * n.L1_V1);
    r.ok = r.m_V > 0.0;
    return r;
}

}  // namespace scalar1d
