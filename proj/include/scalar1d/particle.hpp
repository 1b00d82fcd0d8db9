#pragma once

#include <cmath>

#include "scalar1d/errors.hpp"

namespace scalar1d {

/// Units: c = 1 throughout.
struct ParticleParams {
    double bare_mass = 1.0;  // m~ > 0
    double charge = 1.0;     // a != 0

    void validate() const {
        if (!(bare_mass > 0.0) || !std::isfinite(bare_mass))
            throw ConfigError("particle.bare_mass must be > 0");
        if (charge == 0.0 || !std::isfinite(charge))
            throw ConfigError("particle.charge must be nonzero");
    }
};

}  // namespace scalar1d
