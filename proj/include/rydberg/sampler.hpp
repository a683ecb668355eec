#pragma once

#include <span>
#include <utility>

#include "rydberg/model.hpp"
#include "rydberg/rng.hpp"
#include "rydberg/shot.hpp"

namespace rydberg {

/// How a quoted "amplitude of the motion" maps onto a Gaussian sigma.
enum class AmplitudeConvention {
    turning_point, // classical turning point a, sigma = a / sqrt(2)
    rms,           // the amplitude already is the standard deviation
};

double position_sigma(double amplitude_um, AmplitudeConvention convention);

struct NoiseModel {
    double freq_jitter_rms_mhz = 0.0;
    double intensity_rms = 0.0;        // relative
    double pumping_efficiency = 1.0;
    double temperature_uk = 0.0;       // temperature the sigmas below belong to
    double sigma_longitudinal_um = 0.0;
    double sigma_radial_um = 0.0;
    Vec3 longitudinal_axis = Vec3::UnitY();

    void validate() const;

    /// Everything off: every shot is the nominal configuration.
    static NoiseModel none() { return {}; }
    /// 1 MHz jitter, 5 % intensity noise, 90 % pumping, 70 uK with motion
    /// amplitudes of 0.8 um (longitudinal) and 0.2 um (radial).
    static NoiseModel experiment(
        AmplitudeConvention convention = AmplitudeConvention::turning_point);
};

/// Trap centers, symmetric about the origin along the interatomic axis.
std::pair<Vec3, Vec3> nominal_positions(const GeometryConfig& geometry);

/// Draws delta_nu, intensity, both positions, both pumping flags and the
/// interaction channel, in that order. The number of engine calls only
/// depends on the rejected (non-positive) intensity draws.
ShotParams sample_shot(const NoiseModel& noise, const GeometryConfig& geometry,
                       std::span<const InteractionChannel> channels, RngStream& rng);

/// phi = k . (r_a - r_b)
double frozen_phase(const ShotParams& shot, const Vec3& k_eff);

} // namespace rydberg
