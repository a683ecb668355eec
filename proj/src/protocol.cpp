#include "rydberg/protocol.hpp"

#include <array>
#include <cmath>

#include "parallel.hpp"
#include "rydberg/error.hpp"
#include "rydberg/rng.hpp"
#include "rydberg/sampler.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

namespace {

// Per-atom levels; basis index = 3 * level_a + level_b.
enum Level { zero = 0, one = 1, ryd = 2 };

constexpr Eigen::Index index_of(int a, int b) { return 3 * a + b; }

void require_pulse(const PulseConfig& p, const char* name) {
    if (!(p.omega_mhz >= 0.0) || !std::isfinite(p.omega_mhz)) {
        throw ConfigError(std::string(name) + ": Rabi frequency must be finite and >= 0");
    }
    if (!(p.duration_ns >= 0.0) || !std::isfinite(p.duration_ns)) {
        throw ConfigError(std::string(name) + ": duration must be finite and >= 0");
    }
    if (!p.k_eff.allFinite()) {
        throw ConfigError(std::string(name) + ": wavevector must be finite");
    }
}

// Couples `lower` <-> r on each atom. `sign` is +1 when moving up to r picks
// up e^{+i k.r}, -1 when moving down from r picks up e^{-i k.r}; both give
// the same matrix element <r|H|lower> = (Omega/2) e^{+i k.r}.
HermitianOperator pair_hamiltonian(const PulseConfig& pulse, const ShotParams& shot,
                                   const InteractionChannel& channel, int lower) {
    const double half = 0.5 * angular(shot.intensity_scale * pulse.omega_mhz);
    const std::array<Complex, 2> up{
        shot.pumped_a ? std::polar(half, pulse.k_eff.dot(shot.r_a)) : Complex{},
        shot.pumped_b ? std::polar(half, pulse.k_eff.dot(shot.r_b)) : Complex{}};
    const double detuning = angular(shot.delta_nu_mhz);

    CMatrix h = CMatrix::Zero(9, 9);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const Eigen::Index i = index_of(a, b);
            const int excitations = (a == ryd) + (b == ryd);
            h(i, i) = -detuning * excitations;
            if (a == ryd && b == ryd) h(i, i) += angular(channel.shift_mhz);
            if (a == lower) {
                const Eigen::Index j = index_of(ryd, b);
                h(j, i) = up[0];
                h(i, j) = std::conj(up[0]);
            }
            if (b == lower) {
                const Eigen::Index j = index_of(a, ryd);
                h(j, i) = up[1];
                h(i, j) = std::conj(up[1]);
            }
        }
    }
    return HermitianOperator(protocol_basis(), std::move(h));
}

} // namespace

void ProtocolConfig::validate() const {
    require_pulse(excitation, "pulse 1");
    require_pulse(transfer, "pulse 2");
    geometry.validate();
    noise.validate();
    validate_channels(resolve_channels(channels, geometry));
}

ProtocolConfig ProtocolConfig::matched(const LaserConfig& lasers, const GeometryConfig& geometry) {
    const EffectiveCoupling c = two_photon_rabi(lasers);
    if (!(c.omega_mhz > 0.0)) {
        throw ConfigError("protocol needs a non-zero Rabi frequency");
    }
    ProtocolConfig p;
    p.excitation = {c.omega_mhz, c.k_eff, us_to_ns(1.0 / (2.0 * std::sqrt(2.0) * c.omega_mhz))};
    p.transfer = {c.omega_mhz, c.k_eff, us_to_ns(1.0 / (2.0 * c.omega_mhz))};
    p.geometry = geometry;
    return p;
}

const Basis& protocol_basis() {
    static const Basis basis({"00", "01", "0r", "10", "11", "1r", "r0", "r1", "rr"});
    return basis;
}

StateVector bell_target() {
    CVector v = CVector::Zero(9);
    v(index_of(one, zero)) = 1.0 / std::sqrt(2.0);
    v(index_of(zero, one)) = 1.0 / std::sqrt(2.0);
    return StateVector(protocol_basis(), std::move(v));
}

HermitianOperator build_excitation_hamiltonian(const PulseConfig& pulse, const ShotParams& shot,
                                               const InteractionChannel& channel) {
    return pair_hamiltonian(pulse, shot, channel, zero);
}

HermitianOperator build_transfer_hamiltonian(const PulseConfig& pulse, const ShotParams& shot,
                                             const InteractionChannel& channel) {
    return pair_hamiltonian(pulse, shot, channel, one);
}

StateVector protocol_final_state(const ProtocolConfig& config, const ShotParams& first,
                                 const ShotParams& second) {
    const auto channels = resolve_channels(config.channels, config.geometry);
    const auto& channel = channels.at(first.channel_index);
    const std::array<Segment, 2> schedule{
        Segment{build_excitation_hamiltonian(config.excitation, first, channel),
                ns_to_us(config.excitation.duration_ns)},
        Segment{build_transfer_hamiltonian(config.transfer, second, channel),
                ns_to_us(config.transfer.duration_ns)}};
    return propagate_schedule(StateVector::basis_state(protocol_basis(), "00"), schedule);
}

ProtocolShot evaluate_protocol(const StateVector& final_state) {
    const auto& v = final_state.amplitudes();
    double manifold = 0.0;
    for (int a : {zero, one})
        for (int b : {zero, one}) manifold += std::norm(v(index_of(a, b)));
    ProtocolShot out;
    out.manifold_population = manifold;
    out.fidelity = manifold > 0.0
        ? std::min(1.0, overlap_probability(final_state, bell_target()) / manifold)
        : 0.0;
    return out;
}

ProtocolResult run_protocol(const ProtocolConfig& config, int n_shots, std::uint64_t seed,
                            Execution execution) {
    config.validate();
    if (n_shots < 1) {
        throw ConfigError("n_shots must be >= 1");
    }
    const auto channels = resolve_channels(config.channels, config.geometry);
    std::vector<ProtocolShot> shots(static_cast<std::size_t>(n_shots));

    auto body = [&](long i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const ShotParams first = sample_shot(config.noise, config.geometry, channels, rng);
        ShotParams second = first;
        if (config.resample_positions) {
            const ShotParams moved = sample_shot(config.noise, config.geometry, channels, rng);
            second.r_a = moved.r_a;
            second.r_b = moved.r_b;
        }
        shots[static_cast<std::size_t>(i)] =
            evaluate_protocol(protocol_final_state(config, first, second));
    };

    detail::for_each_index(n_shots, execution, body);

    ProtocolResult r;
    for (const auto& s : shots) {
        r.fidelities.push_back(s.fidelity);
        r.manifold_populations.push_back(s.manifold_population);
        r.mean_fidelity += s.fidelity;
        r.mean_manifold_population += s.manifold_population;
    }
    r.mean_fidelity /= n_shots;
    r.mean_manifold_population /= n_shots;
    double sq = 0.0;
    for (double f : r.fidelities) sq += (f - r.mean_fidelity) * (f - r.mean_fidelity);
    r.fidelity_stddev = n_shots > 1 ? std::sqrt(sq / (n_shots - 1)) : 0.0;
    return r;
}

} // namespace rydberg
