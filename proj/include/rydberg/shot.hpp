#pragma once

#include <cstddef>

#include "rydberg/units.hpp"

namespace rydberg {

/// One Monte Carlo realization of the experimental imperfections.
struct ShotParams {
    double delta_nu_mhz = 0.0;    // two-photon detuning offset
    double intensity_scale = 1.0; // multiplies the Rabi frequency, > 0
    Vec3 r_a = Vec3::Zero();      // um, includes the nominal trap center
    Vec3 r_b = Vec3::Zero();
    bool pumped_a = true;
    bool pumped_b = true;
    std::size_t channel_index = 0;

    friend bool operator==(const ShotParams&, const ShotParams&) = default;
};

} // namespace rydberg
