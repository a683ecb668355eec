#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rydberg/model.hpp"
#include "rydberg/sampler.hpp"

namespace rydberg {

/// Which traps hold an atom.
enum class Mode { single_atom_a, single_atom_b, two_atom };

std::string_view to_string(Mode mode);
/// Throws ConfigError for unknown names.
Mode parse_mode(std::string_view name);

/// An interaction channel as configured. A relative channel's shift is a
/// multiple of C3/R^3 and therefore follows the separation; an absolute one
/// is a fixed shift in MHz.
struct ChannelSpec {
    double shift = 1.0;
    bool relative = true;
    double weight = 1.0;
};

std::vector<InteractionChannel> resolve_channels(std::span<const ChannelSpec> specs,
                                                 const GeometryConfig& geometry);

struct DetectionParams {
    double p_loss_given_rydberg = 1.0;
    double p_loss_given_ground = 0.0;

    void validate() const;
};

struct ExperimentConfig {
    LaserConfig lasers;
    GeometryConfig geometry;
    std::vector<ChannelSpec> channels{ChannelSpec{}};
    NoiseModel noise;
    DetectionParams detection;
    std::vector<double> durations_ns;
    int n_shots = 100;
    std::uint64_t seed = 1;
    Mode mode = Mode::two_atom;

    /// Throws ConfigError on the first violated invariant.
    void validate() const;
};

/// Evenly spaced durations start, start+step, ..., up to stop inclusive.
std::vector<double> duration_grid(double start_ns, double stop_ns, double step_ns);

} // namespace rydberg
