#include "scalar1d/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "scalar1d/errors.hpp"

namespace scalar1d {
namespace {

// ---------------------------------------------------------------------------
// Unit shapes on [-1,1], peak value 1 at s=0.
// ---------------------------------------------------------------------------

// poly_spline: B(s) = 1 - 10u^3 + 15u^4 - 6u^5, u = |s|. C^2 at s=0 and s=+-1.
double spline_val(double s) {
    const double u = std::fabs(s);
    if (u >= 1.0) return 0.0;
    return 1.0 + u * u * u * (-10.0 + u * (15.0 - 6.0 * u));
}

double spline_deriv(double s) {
    const double u = std::fabs(s);
    if (u >= 1.0) return 0.0;
    const double du = -30.0 * u * u * (1.0 - u) * (1.0 - u);  // dB/du
    return (s >= 0.0 ? du : -du);
}

// antiderivative of B from -1, so F(-1)=0, F(1)=1 (the unit spline has total
// integral exactly 1).
double spline_antideriv(double s) {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double u = std::fabs(s);
    const double odd = u * (1.0 + u * u * u * (-2.5 + u * (3.0 - u)));  // int_0^u B
    return 0.5 + (s >= 0.0 ? odd : -odd);
}

constexpr double kSplineSupDeriv = 1.875;               // 30 u^2 (1-u)^2 at u=1/2
const double kSplineSupDeriv2 = 10.0 / std::sqrt(3.0);  // 60 u(1-u)|1-2u| max
constexpr double kSplineIntegral = 1.0;

// smooth_bump: B(s) = exp(1 - 1/(1-s^2)).
double bump_val(double s) {
    if (std::fabs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_deriv(double s) {
    if (std::fabs(s) >= 1.0) return 0.0;
    const double t = 1.0 - s * s;
    return bump_val(s) * (-2.0 * s / (t * t));
}

// Shape constants for the bump, computed offline at 30-digit precision and
// rounded up in the last digit so they stay certified upper bounds.
constexpr double kBumpSupDeriv = 2.1703570857103392;
constexpr double kBumpSupDeriv2 = 21.065882118926465;
constexpr double kBumpIntegral = 1.2069003224378763;  // int_{-1}^{1} B

// Antiderivative of the bump: no elementary closed form. Cached Chebyshev fit
// of int_{-1}^{s} B, built once from a 201-point Clenshaw-Curtis rule and the
// exact term-by-term integral of the Chebyshev series; max error ~1e-15.
struct BumpAntiderivTable {
    static constexpr int N = 200;
    std::array<double, N + 2> b{};  // Chebyshev coefficients of the antiderivative

    BumpAntiderivTable() {
        std::array<double, N + 1> f{};
        std::array<double, N + 1> c{};
        const double pi = std::acos(-1.0);
        for (int k = 0; k <= N; ++k) f[k] = bump_val(std::cos(pi * k / N));
        for (int j = 0; j <= N; ++j) {
            double s = 0.5 * f[0] + 0.5 * f[N] * std::cos(pi * j);
            for (int m = 1; m < N; ++m) s += f[m] * std::cos(pi * j * m / N);
            c[j] = 2.0 / N * s;
        }
        c[0] *= 0.5;
        c[N] *= 0.5;
        auto cc = [&](int j) { return j <= N ? c[j] : 0.0; };
        b[1] = (2.0 * cc(0) - cc(2)) / 2.0;
        for (int j = 2; j <= N + 1; ++j) b[j] = (cc(j - 1) - cc(j + 1)) / (2.0 * j);
        b[0] -= eval(-1.0);  // normalize F(-1) = 0
    }

    double eval(double s) const {
        double u1 = 0.0, u2 = 0.0;
        for (int j = N + 1; j >= 1; --j) {
            const double next = b[j] + 2.0 * s * u1 - u2;
            u2 = u1;
            u1 = next;
        }
        return b[0] + s * u1 - u2;
    }
};

double bump_antideriv(double s) {
    static const BumpAntiderivTable table;
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return kBumpIntegral;
    return table.eval(s);
}

struct ShapeConstants {
    double sup_deriv;
    double sup_deriv2;
    double integral;
};

ShapeConstants shape_constants(ProfileKind kind) {
    if (kind == ProfileKind::SmoothBump)
        return {kBumpSupDeriv, kBumpSupDeriv2, kBumpIntegral};
    return {kSplineSupDeriv, kSplineSupDeriv2, kSplineIntegral};
}

double shape_val(ProfileKind kind, double s) {
    return kind == ProfileKind::SmoothBump ? bump_val(s) : spline_val(s);
}
double shape_deriv(ProfileKind kind, double s) {
    return kind == ProfileKind::SmoothBump ? bump_deriv(s) : spline_deriv(s);
}
double shape_antideriv(ProfileKind kind, double s) {
    return kind == ProfileKind::SmoothBump ? bump_antideriv(s) : spline_antideriv(s);
}

// Group components (already filtered to one target) into clusters of
// overlapping supports, apply `weight` per component, sum within a cluster and
// take the max across clusters. Gives a certified sup bound that is exact for
// disjoint supports.
double cluster_sup(std::vector<const ProfileComponent*> comps,
                   double (*weight)(const ProfileComponent&)) {
    if (comps.empty()) return 0.0;
    std::sort(comps.begin(), comps.end(), [](const ProfileComponent* a, const ProfileComponent* b) {
        return a->center - a->half_width < b->center - b->half_width;
    });
    double best = 0.0, cluster = 0.0, cluster_hi = -1e300;
    for (const auto* c : comps) {
        const double lo = c->center - c->half_width;
        const double hi = c->center + c->half_width;
        if (lo > cluster_hi) {
            best = std::max(best, cluster);
            cluster = 0.0;
            cluster_hi = hi;
        } else {
            cluster_hi = std::max(cluster_hi, hi);
        }
        cluster += weight(*c);
    }
    return std::max(best, cluster);
}

}  // namespace

RadiationProfile::RadiationProfile(std::vector<ProfileComponent> components)
    : comps_(std::move(components)) {
    for (const auto& c : comps_) {
        if (!(c.half_width > 0.0))
            throw ConfigError("profile component half_width must be > 0");
        if (!std::isfinite(c.center) || !std::isfinite(c.amplitude))
            throw ConfigError("profile component has non-finite parameter");
    }
}

double RadiationProfile::value(ProfileTarget target, double x) const {
    double sum = 0.0;
    for (const auto& c : comps_)
        if (c.target == target)
            sum += c.amplitude * shape_val(c.kind, (x - c.center) / c.half_width);
    return sum;
}

double RadiationProfile::derivative(ProfileTarget target, double x) const {
    double sum = 0.0;
    for (const auto& c : comps_)
        if (c.target == target)
            sum += c.amplitude / c.half_width *
                   shape_deriv(c.kind, (x - c.center) / c.half_width);
    return sum;
}

double RadiationProfile::antiderivative(ProfileTarget target, double x) const {
    double sum = 0.0;
    for (const auto& c : comps_)
        if (c.target == target)
            sum += c.amplitude * c.half_width *
                   shape_antideriv(c.kind, (x - c.center) / c.half_width);
    return sum;
}

ProfileNorms RadiationProfile::norms() const {
    std::vector<const ProfileComponent*> v0, v1;
    for (const auto& c : comps_)
        (c.target == ProfileTarget::V0 ? v0 : v1).push_back(&c);

    ProfileNorms n;
    n.sup_V0 = cluster_sup(v0, [](const ProfileComponent& c) { return std::fabs(c.amplitude); });
    n.sup_V1 = cluster_sup(v1, [](const ProfileComponent& c) { return std::fabs(c.amplitude); });
    n.sup_d1V0 = cluster_sup(v0, [](const ProfileComponent& c) {
        return std::fabs(c.amplitude) / c.half_width * shape_constants(c.kind).sup_deriv;
    });
    for (const auto* c : v1)
        n.L1_V1 += std::fabs(c->amplitude) * c->half_width * shape_constants(c->kind).integral;
    const double sup_d2V0 = cluster_sup(v0, [](const ProfileComponent& c) {
        const double w = c.half_width;
        return std::fabs(c.amplitude) / (w * w) * shape_constants(c.kind).sup_deriv2;
    });
    const double sup_d1V1 = cluster_sup(v1, [](const ProfileComponent& c) {
        return std::fabs(c.amplitude) / c.half_width * shape_constants(c.kind).sup_deriv;
    });
    n.lip_d1V = sup_d2V0 + sup_d1V1;
    return n;
}

std::optional<Interval> RadiationProfile::support_bounds() const {
    if (comps_.empty()) return std::nullopt;
    Interval iv{1e300, -1e300};
    for (const auto& c : comps_) {
        iv.lo = std::min(iv.lo, c.center - c.half_width);
        iv.hi = std::max(iv.hi, c.center + c.half_width);
    }
    return iv;
}

}  // namespace scalar1d
