#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "scalar1d/particle.hpp"
#include "scalar1d/profiles.hpp"
#include "scalar1d/worldline.hpp"

namespace scalar1d {

/// Curve space for the fixed-point solve: Lipschitz curves q(0) = 0 on
/// [0, horizon] measured in the exponentially weighted sup norm
/// ||q||_gamma = sup_t e^{-gamma t} |q(t)|.
struct CurveSpaceSpec {
    double horizon = 20.0;
    double gamma = 0.0;                           // must exceed the Lipschitz estimate L
    std::array<double, 3> k_vec = {0.0, 0.0, 0.0};  // (1, K, |a|/2)
};

/// (Q, p, W) on a uniform grid with linear interpolation; q(0) = 0.
class SampledCurve {
  public:
    SampledCurve(double horizon, std::size_t nodes);

    double horizon() const { return horizon_; }
    std::size_t nodes() const { return n_; }
    double time_at(std::size_t i) const { return horizon_ * static_cast<double>(i) / static_cast<double>(n_ - 1); }
    std::array<double, 3>& operator[](std::size_t i) { return vals_[i]; }
    const std::array<double, 3>& operator[](std::size_t i) const { return vals_[i]; }
    std::array<double, 3> eval(double t) const;

    /// Largest per-component Lipschitz quotient over grid cells.
    std::array<double, 3> lipschitz_constants() const;

    bool same_grid(const SampledCurve& other) const {
        return n_ == other.n_ && horizon_ == other.horizon_;
    }

  private:
    double horizon_;
    std::size_t n_;
    std::vector<std::array<double, 3>> vals_;
};

/// sup over grid nodes of e^{-gamma t} * ||q2(t) - q1(t)||_2.
double weighted_distance(const SampledCurve& q1, const SampledCurve& q2, double gamma);

/// Unweighted variant (gamma = 0).
double sup_distance(const SampledCurve& q1, const SampledCurve& q2);

/// One application of the integral map F: cumulative trapezoid of the reduced
/// system's right-hand side evaluated along the input curve.
SampledCurve picard_map(const ParticleParams& params, const RadiationProfile& profile,
                        const SampledCurve& q);

/// Computable upper bound L with ||f(q2) - f(q1)|| <= L ||q2 - q1|| on the
/// admissible curve class, built from the mass floor m_V, the force bound K
/// and the radiation Lipschitz constant K'. The map contracts the weighted
/// norm by L/gamma for any gamma > L.
double lipschitz_estimate(const ParticleParams& params, const RadiationProfile& profile);

struct ContractionReport {
    double L_est = 0.0;
    double gamma = 0.0;
    double ratio_bound = 0.0;  // L_est / gamma
    std::vector<double> observed_ratios;
    int iterations = 0;
    double final_residual = 0.0;      // last weighted successive distance
    double final_sup_residual = 0.0;  // last unweighted successive distance
};

struct MaxIterExceeded : std::runtime_error {
    ContractionReport report;
    explicit MaxIterExceeded(ContractionReport r)
        : std::runtime_error("picard iteration did not reach tolerance in " +
                             std::to_string(r.iterations) + " iterations"),
          report(std::move(r)) {}
};

/// Iterate q_{n+1} = F(q_n) from q = 0 until successive iterates agree to tol
/// in the weighted norm and in the plain sup norm. (The weighted norm alone is
/// blind to late-time error once gamma * horizon is large, so both are
/// required; the certified ratios are still reported in the weighted norm.)
std::pair<SampledCurve, ContractionReport> solve_fixed_point(
    const ParticleParams& params, const RadiationProfile& profile,
    const CurveSpaceSpec& spec, std::size_t grid_nodes, double tol, int max_iter);

/// Default curve-space spec: gamma = gamma_factor * L_est, k = (1, K, |a|/2).
CurveSpaceSpec make_curve_space(const ParticleParams& params, const RadiationProfile& profile,
                                double horizon, double gamma_factor = 2.0);

}  // namespace scalar1d
