#pragma once

#include <optional>
#include <vector>

namespace scalar1d {

enum class ProfileTarget { V0, V1 };

/// smooth_bump: exp(1 - 1/(1-s^2)) on |s|<1, C-infinity, peak 1 at the center.
/// poly_spline: 1 - 10|s|^3 + 15s^4 - 6|s|^5 on |s|<1, exactly C^2, peak 1,
///              with closed-form derivative and antiderivative.
enum class ProfileKind { SmoothBump, PolySpline };

struct ProfileComponent {
    ProfileTarget target = ProfileTarget::V0;
    ProfileKind kind = ProfileKind::PolySpline;
    double center = 0.0;
    double half_width = 1.0;  // support is [center - half_width, center + half_width]
    double amplitude = 0.0;   // peak value of the component
};

/// Certified upper bounds on the radiation data, assembled from per-component
/// closed forms (clusters of overlapping supports are summed, disjoint
/// clusters contribute via max). Everything downstream that needs a constant
/// (mass floor, force bound, Lipschitz estimate) draws from here.
struct ProfileNorms {
    double sup_V0 = 0.0;    // sup |V0|
    double L1_V1 = 0.0;     // integral of |V1|
    double sup_d1V0 = 0.0;  // sup |V0'|
    double sup_V1 = 0.0;    // sup |V1|
    double lip_d1V = 0.0;   // Lipschitz constant of d1 V: sup|V0''| + sup|V1'|
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Compactly supported radiation data (V0, V1) with analytically exact value,
/// derivative and antiderivative. Immutable after construction; safe to share
/// across threads.
class RadiationProfile {
  public:
    RadiationProfile() = default;
    explicit RadiationProfile(std::vector<ProfileComponent> components);

    const std::vector<ProfileComponent>& components() const { return comps_; }
    bool empty() const { return comps_.empty(); }

    /// Exact component sum for the given target; identically zero outside the
    /// union of supports.
    double value(ProfileTarget target, double x) const;

    /// Exact derivative of the component sum.
    double derivative(ProfileTarget target, double x) const;

    /// Antiderivative normalized to 0 at -infinity; constant (the total
    /// integral) to the right of all supports.
    double antiderivative(ProfileTarget target, double x) const;

    ProfileNorms norms() const;

    /// Smallest closed interval containing every component support; nullopt
    /// for the empty profile.
    std::optional<Interval> support_bounds() const;

  private:
    std::vector<ProfileComponent> comps_;
};

}  // namespace scalar1d
