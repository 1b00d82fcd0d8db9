#pragma once

#include <optional>

#include "scalar1d/particle.hpp"
#include "scalar1d/profiles.hpp"

namespace scalar1d {

/// Which one-sided limit a gradient refers to at a kink. Away means the point
/// is not on a kink locus and the value is two-sided.
enum class Side { Left, Right, Away };

struct FieldGradient {
    double d0 = 0.0;  // time derivative
    double d1 = 0.0;  // space derivative
    Side side = Side::Away;
};

/// Points closer than this to a kink locus count as "on" it; gradient calls
/// there must name a side.
inline constexpr double kKinkTol = 1e-12;

/// Freely evolving radiation V(t,x) by d'Alembert's formula:
///   V = (V0(x+t) + V0(x-t))/2 + (A1(x+t) - A1(x-t))/2,  A1' = V1.
double eval_V(const RadiationProfile& profile, double t, double x);

/// d1 V = (V0'(x+t) + V0'(x-t) + V1(x+t) - V1(x-t)) / 2
/// d0 V = (V0'(x+t) - V0'(x-t) + V1(x+t) + V1(x-t)) / 2
FieldGradient eval_grad_V(const RadiationProfile& profile, double t, double x);

/// Evolved static cone: U_stat(t,x) = -(a/4)(|x+t| + |x-t|). Equals -(a/2)t
/// inside the light cone and -(a/2)|x| outside.
double eval_U_stat(double a, double t, double x);

/// One-sided gradients of U_stat. On a kink locus (|x +- t| below kKinkTol)
/// the caller must pass a side; elsewhere the side argument is ignored.
FieldGradient eval_grad_U_stat(double a, double t, double x,
                               std::optional<Side> side = std::nullopt);

struct SmallnessReport {
    double m_V = 0.0;  // m~ - |a| (sup|V0| + ||V1||_L1 / 2)
    bool ok = false;   // strictly positive mass floor required
};

/// Mass-floor check gating every simulation.
SmallnessReport smallness_check(const ParticleParams& params, const RadiationProfile& profile);

}  // namespace scalar1d
