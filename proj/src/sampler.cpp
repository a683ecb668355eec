#include "rydberg/sampler.hpp"

#include <cmath>

#include "rydberg/error.hpp"

namespace rydberg {

namespace {

// Two unit vectors spanning the plane orthogonal to `n`.
std::pair<Vec3, Vec3> orthonormal_complement(const Vec3& n) {
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitZ();
    Vec3 u = (seed - seed.dot(n) * n).normalized();
    Vec3 v = n.cross(u);
    return {u, v};
}

Vec3 displacement(const NoiseModel& noise, const Vec3& u, const Vec3& v, RngStream& rng) {
    const double l = noise.sigma_longitudinal_um * rng.normal();
    const double p = noise.sigma_radial_um * rng.normal();
    const double q = noise.sigma_radial_um * rng.normal();
    return l * noise.longitudinal_axis + p * u + q * v;
}

std::size_t pick_channel(std::span<const InteractionChannel> channels, double x) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        cumulative += channels[i].weight;
        if (x < cumulative) {
            return i;
        }
    }
    // Rounding in the cumulative sum; fall back to the last weighted channel.
    for (std::size_t i = channels.size(); i-- > 0;) {
        if (channels[i].weight > 0.0) {
            return i;
        }
    }
    return 0;
}

} // namespace

double position_sigma(double amplitude_um, AmplitudeConvention convention) {
    switch (convention) {
    case AmplitudeConvention::turning_point:
        return amplitude_um / std::sqrt(2.0);
    case AmplitudeConvention::rms:
        return amplitude_um;
    }
    return amplitude_um;
}

void NoiseModel::validate() const {
    if (!(freq_jitter_rms_mhz >= 0.0) || !(intensity_rms >= 0.0) ||
        !(sigma_longitudinal_um >= 0.0) || !(sigma_radial_um >= 0.0) ||
        !(temperature_uk >= 0.0)) {
        throw ConfigError("noise RMS values and temperature must be >= 0");
    }
    if (!(pumping_efficiency >= 0.0 && pumping_efficiency <= 1.0)) {
        throw ConfigError("pumping efficiency must lie in [0, 1]");
    }
    if (std::abs(longitudinal_axis.norm() - 1.0) > 1e-12) {
        throw ConfigError("longitudinal axis must be a unit vector");
    }
}

NoiseModel NoiseModel::experiment(AmplitudeConvention convention) {
    NoiseModel n;
    n.freq_jitter_rms_mhz = 1.0;
    n.intensity_rms = 0.05;
    n.pumping_efficiency = 0.90;
    n.temperature_uk = 70.0;
    n.sigma_longitudinal_um = position_sigma(0.8, convention);
    n.sigma_radial_um = position_sigma(0.2, convention);
    n.longitudinal_axis = Vec3::UnitY();
    return n;
}

std::pair<Vec3, Vec3> nominal_positions(const GeometryConfig& geometry) {
    const Vec3 half = 0.5 * geometry.separation_um * geometry.axis;
    return {-half, half};
}

ShotParams sample_shot(const NoiseModel& noise, const GeometryConfig& geometry,
                       std::span<const InteractionChannel> channels, RngStream& rng) {
    ShotParams shot;
    shot.delta_nu_mhz = noise.freq_jitter_rms_mhz * rng.normal();

    // Truncated to > 0 by rejection.
    do {
        shot.intensity_scale = 1.0 + noise.intensity_rms * rng.normal();
    } while (!(shot.intensity_scale > 0.0));

    const auto [u, v] = orthonormal_complement(noise.longitudinal_axis);
    const auto [ra, rb] = nominal_positions(geometry);
    shot.r_a = ra + displacement(noise, u, v, rng);
    shot.r_b = rb + displacement(noise, u, v, rng);

    shot.pumped_a = rng.bernoulli(noise.pumping_efficiency);
    shot.pumped_b = rng.bernoulli(noise.pumping_efficiency);
    shot.channel_index = channels.empty() ? 0 : pick_channel(channels, rng.uniform());
    return shot;
}

double frozen_phase(const ShotParams& shot, const Vec3& k_eff) {
    return k_eff.dot(shot.r_a - shot.r_b);
}

} // namespace rydberg
