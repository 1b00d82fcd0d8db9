#pragma once

#include "scalar1d/worldline.hpp"

namespace scalar1d {

/// First time after which both characteristics Q(t) +- t are outside the
/// radiation support, so every external force term vanishes identically.
/// Returns 0 for the empty profile; throws NotYetExited if the trajectory is
/// too short.
double radiation_exit_time(const Trajectory& traj);

/// Residuals of two identities that hold along exact solutions, measured with
/// finite differences of the dense output (so they gauge integrator error):
///   rate:  u0(t) dW/dt = a/2                (proper-time rate of U_source)
///   accel: m du1/dt = -(a^2/2) u1 + a u1 dV/dt + (a/u0) d1V
struct CancellationReport {
    double rate_residual = 0.0;
    double accel_residual = 0.0;
};
CancellationReport cancellation_check(const Trajectory& traj);

/// Post-exit decay diagnostics for u1' = -(a^2/2m) u1.
struct DecayFit {
    double slope_residual = 0.0;   // max |d/dt ln|u1| + a^2/(2m)| pointwise
    bool powerlaw_ok = false;      // integrated power-law bound satisfied
    double A_bound = 0.0;          // sup of m(t)/t past the exit time
    double exponent = 0.0;         // a^2 / (2 A_bound)
    double regression_slope = 0.0; // slope of ln|u1| against int dt/m (exact: -a^2/2)
    bool u1_identically_zero = false;
};
DecayFit decay_fit(const Trajectory& traj, double T_exit);

/// Mass floor / growth audit.
struct MassBounds {
    double m_min = 0.0;  // min over samples of m(t)
    double m_V = 0.0;    // certified floor
    double A_fit = 0.0;  // smallest A with m(t) <= m~ + |a| sup V0 + A t over the run
    double v_max = 0.0;  // sup |v|, strictly below 1
};
MassBounds mass_bounds_check(const Trajectory& traj);

/// int_0^t (1 - |v|) ds, evaluated by per-step Gauss quadrature on the dense
/// output. Grows without bound; post-exit it grows at nearly unit rate.
double velocity_defect_integral(const Trajectory& traj, double t);

}  // namespace scalar1d
