#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "scalar1d/free_field.hpp"
#include "scalar1d/particle.hpp"
#include "scalar1d/profiles.hpp"

namespace scalar1d {

/// Reduced state q = (Q, p, W): particle position, dynamical momentum and the
/// sourced potential along the worldline, all in coordinate time.
struct ReducedState {
    double t = 0.0;
    double Q = 0.0;
    double p = 0.0;
    double W = 0.0;
};

struct Kinematics {
    double v = 0.0;   // dQ/dt, |v| < 1
    double u0 = 1.0;  // two-velocity components, u0^2 - u1^2 = 1
    double u1 = 0.0;
    double m = 0.0;   // dynamical mass, > 0
};

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 0.02;
    /// Test-only mutation knob: scales the a^2/2 self-force coefficient in the
    /// momentum equation. 1.0 is the physical value.
    double self_force_scale = 1.0;
};

/// m(t,Q,W) = m~ + (a^2/2) t - a V(t,Q) - a W. Uses the identity
/// U_stat(t,Q) = -(a/2) t, valid on |Q| <= t. Throws NonpositiveMass if m <= 0.
double dynamical_mass(const ParticleParams& params, const RadiationProfile& profile,
                      double t, double Q, double W);

Kinematics kinematics(const ParticleParams& params, const RadiationProfile& profile,
                      const ReducedState& state);

/// Right-hand side of the reduced system:
///   dQ/dt = p / r
///   dp/dt = -(a^2/2) p / r + a (m / r) d1V(t, Q)
///   dW/dt = (a/2) m / r          with r = sqrt(m^2 + p^2).
std::array<double, 3> rhs(const ParticleParams& params, const RadiationProfile& profile,
                          const ReducedState& state, double self_force_scale = 1.0);

/// Force bound K = a^2/2 + |a| (sup|V0'| + sup|V1|); Lipschitz constant of the
/// momentum component and second entry of the curve-class vector k.
double force_bound(const ParticleParams& params, const ProfileNorms& norms);

/// Trajectory with cubic-Hermite dense output between accepted RK steps.
class Trajectory {
  public:
    Trajectory(ParticleParams params, RadiationProfile profile,
               std::vector<double> ts, std::vector<std::array<double, 3>> ys,
               std::vector<std::array<double, 3>> fs, double interp_error_bound);

    const ParticleParams& params() const { return params_; }
    const RadiationProfile& profile() const { return profile_; }
    double end_time() const { return ts_.back(); }
    std::size_t size() const { return ts_.size(); }
    const std::vector<double>& times() const { return ts_; }
    ReducedState node(std::size_t i) const;

    /// Dense-output state at t in [0, end_time].
    ReducedState state(double t) const;
    Kinematics kin(double t) const { return kinematics(params_, profile_, state(t)); }

    /// Recorded bound on the dense-output interpolation error.
    double interp_error_bound() const { return interp_err_; }

  private:
    ParticleParams params_;
    RadiationProfile profile_;
    std::vector<double> ts_;
    std::vector<std::array<double, 3>> ys_;
    std::vector<std::array<double, 3>> fs_;
    double interp_err_ = 0.0;
};

/// Integrate the reduced system from (0,0,0,0) to t_end with a Dormand-Prince
/// 5(4) embedded pair. Requires smallness_check to pass.
Trajectory integrate(const ParticleParams& params, const RadiationProfile& profile,
                     double t_end, const StepControl& ctrl = {});

}  // namespace scalar1d
