#pragma once

#include <optional>
#include <vector>

#include "scalar1d/free_field.hpp"
#include "scalar1d/worldline.hpp"

namespace scalar1d {

/// Within this distance of the worldline a gradient request must name a side.
inline constexpr double kTubeGuard = 1e-3;

struct FieldSample {
    double t = 0.0;
    double x = 0.0;
    double U = 0.0;
    FieldGradient grad;
};

/// One-sided gradients extrapolated onto the worldline from both sides, and
/// their jumps (right minus left).
struct WorldlineJump {
    FieldGradient left;
    FieldGradient right;
    double jump_d0 = 0.0;
    double jump_d1 = 0.0;
};

/// Field reconstruction over a frozen trajectory: the sourced piece via the
/// Duhamel integral, the total U = V + U_stat + U_source, and one-sided
/// gradients near the worldline kink.
///
/// The Duhamel integrand (a/2) sqrt(1 - v(s)^2) is integrated with a 16-point
/// Gauss rule per trajectory step (cached cumulatively); the support boundary
/// s*(t,x) solves (t-s) = |x - Q(s)| and is bracketed by bisection, which is
/// safe because that function is strictly decreasing for |v| < 1.
class SourceField {
  public:
    explicit SourceField(const Trajectory& traj);

    const Trajectory& trajectory() const { return traj_; }

    /// U_source(t,x); exactly zero outside the light cone |x| <= t.
    double u_source(double t, double x) const;

    /// Numerically differentiated U_source. Within kTubeGuard of the worldline
    /// the side must be given; stencils never straddle the kink or the cone.
    FieldGradient grad_source(double t, double x, std::optional<Side> side = std::nullopt) const;

    double u_total(double t, double x) const;
    FieldGradient grad_total(double t, double x, std::optional<Side> side = std::nullopt) const;
    FieldSample sample(double t, double x, std::optional<Side> side = std::nullopt) const;

    /// One-sided gradients at x = Q(t), each Richardson-extrapolated in the
    /// offset from {4h, 2h, h}, h = 1e-4.
    WorldlineJump worldline_jump(double t) const;

  private:
    double proper_time_integral(double s) const;  // int_0^s sqrt(1 - v^2)
    double support_root(double t, double x) const;
    void check_time(double t) const;

    const Trajectory& traj_;
    std::vector<double> cum_;  // cumulative integral at trajectory nodes
};

}  // namespace scalar1d
