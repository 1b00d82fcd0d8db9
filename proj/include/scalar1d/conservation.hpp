#pragma once

#include <array>
#include <vector>

#include "scalar1d/source_field.hpp"

namespace scalar1d {

/// Field energy tensor components in signature diag(1,-1):
///   T00 = T11 = (d0^2 + d1^2)/2,  T01 = T10 = -d0 d1.
struct EnergyTensor {
    double T00 = 0.0;
    double T01 = 0.0;
    double T11 = 0.0;
};

EnergyTensor energy_tensor(const FieldGradient& grad);

using Vec2 = std::array<double, 2>;  // (nu = 0, nu = 1) components

/// Momentum-balance audit over the world tube [t1,t2] x [Q(t) - eps, Q(t) + eps].
///
/// residual       = delta_p + flux through all four boundary faces; this is the
///                  exact weak-conservation identity and should vanish to
///                  numerical error at every eps.
/// tube_residual  = delta_p + time-like face flux only; equals minus the cap
///                  fluxes, is O(eps), and its eps -> 0 extrapolation is the
///                  audited limit statement.
struct ConservationReport {
    double epsilon = 0.0;
    double t1 = 0.0, t2 = 0.0;
    Vec2 delta_p{0.0, 0.0};
    Vec2 flux_cap_lo{0.0, 0.0};   // t = t1 face (outward normal -dt)
    Vec2 flux_cap_hi{0.0, 0.0};   // t = t2 face
    Vec2 flux_left{0.0, 0.0};     // x = Q(t) - eps face
    Vec2 flux_right{0.0, 0.0};    // x = Q(t) + eps face
    Vec2 residual{0.0, 0.0};
    Vec2 tube_residual{0.0, 0.0};
    // Filled by epsilon_study:
    std::vector<std::pair<double, double>> residual_vs_epsilon;  // (eps, max\nu |tube_residual|)
    Vec2 extrapolated_residual{0.0, 0.0};
    double measured_rate = 0.0;  // empirical order of the tube residual in eps
};

ConservationReport tube_flux(const SourceField& field, double t1, double t2, double epsilon,
                             double quad_tol = 1e-10);

/// Runs tube_flux over a decreasing epsilon sequence and extrapolates the tube
/// residual to eps = 0 (Neville on the epsilon polynomial).
ConservationReport epsilon_study(const SourceField& field, double t1, double t2,
                                 const std::vector<double>& epsilons, double quad_tol = 1e-10);

/// F^nu = -[n_mu T^{mu nu}] from one-sided energy tensors at the worldline.
Vec2 force_from_jump(const SourceField& field, double t);

/// Closed-form force law for cross-checks:
///   F^1 = -(a^2/2) u1 + a d1V(t,Q),  F^0 = -(a^2/2)(u0 - 1) - a d0V(t,Q).
Vec2 force_closed_form(const Trajectory& traj, double t);

}  // namespace scalar1d
