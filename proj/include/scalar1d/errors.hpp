#pragma once

#include <stdexcept>
#include <string>

namespace scalar1d {

/// Dynamical mass reached zero or below. Cannot happen for admissible data
/// (see smallness_check); treated as a fatal integrator fault.
struct NonpositiveMass : std::runtime_error {
    double mass;
    double time;
    NonpositiveMass(double m, double t)
        : std::runtime_error("nonpositive dynamical mass m=" + std::to_string(m) +
                             " at t=" + std::to_string(t)),
          mass(m), time(t) {}
};

/// Adaptive step fell below 1e-14 * t_end.
struct StepUnderflow : std::runtime_error {
    double step;
    double time;
    StepUnderflow(double h, double t)
        : std::runtime_error("step underflow h=" + std::to_string(h) +
                             " at t=" + std::to_string(t)),
          step(h), time(t) {}
};

/// Initial radiation too large: the mass floor m_V would be nonpositive.
struct SmallnessViolation : std::runtime_error {
    double m_V;
    explicit SmallnessViolation(double mv)
        : std::runtime_error("smallness check failed: m_V=" + std::to_string(mv) +
                             " must be > 0"),
          m_V(mv) {}
};

/// Evaluation time outside the computed trajectory range.
struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// World-tube half-width must stay above the gradient guard band.
struct EpsilonTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two sampled curves were combined but live on different grids.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trajectory too short for both characteristics to leave the radiation support.
struct NotYetExited : std::runtime_error {
    double reached_right;  // max of Q(t)+t over the run
    double reached_left;   // min of Q(t)-t over the run
    NotYetExited(double r, double l)
        : std::runtime_error("radiation has not exited: Q+t reached " + std::to_string(r) +
                             ", Q-t reached " + std::to_string(l)),
          reached_right(r), reached_left(l) {}
};

/// Trajectory does not extend far enough past the exit time for a decay fit.
struct InsufficientHorizon : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scalar1d
