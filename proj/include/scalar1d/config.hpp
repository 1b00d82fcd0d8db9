#pragma once

#include <array>
#include <string>
#include <vector>

#include "scalar1d/particle.hpp"
#include "scalar1d/profiles.hpp"

namespace scalar1d {

/// Versioned, schema-validated run configuration (JSON on disk).
struct RunConfig {
    int version = 1;
    ParticleParams particle;
    RadiationProfile radiation;

    struct Integrator {
        double t_end = 20.0;
        double tolerance = 1e-10;
        double max_step = 0.02;
        double output_dt = 0.05;
    } integrator;

    struct Picard {
        bool enabled = true;
        double horizon = 20.0;
        double gamma_factor = 2.0;
        double tol = 1e-9;
        int max_iter = 60;
        int grid_nodes = 4096;
    } picard;

    struct Verify {
        std::vector<std::array<double, 2>> windows;
        std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
        std::vector<double> snapshot_times;
        double grid_min = -25.0;
        double grid_max = 25.0;
        int grid_points = 201;
        double cross_method_tol = 1e-5;
        double cancellation_rate_tol = 1e-6;
        double cancellation_accel_tol = 1e-6;
    } verify;

    struct Output {
        std::string directory = "out";
        std::vector<std::string> formats{"csv"};
    } output;

    struct Sweep {
        std::vector<double> charge;
        std::vector<double> bare_mass;
        std::vector<double> amplitude_scale;
        bool active() const {
            return !charge.empty() || !bare_mass.empty() || !amplitude_scale.empty();
        }
    } sweep;
};

/// Parse and validate; throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// Serialize back to JSON (full double precision; parse/serialize round-trips).
std::string serialize_config(const RunConfig& config);

}  // namespace scalar1d
