#pragma once

#include <cstdint>
#include <vector>

#include "rydberg/experiment.hpp"
#include "rydberg/measurement.hpp"
#include "rydberg/quantum.hpp"

// Two-pulse phase-erasure sequence on atoms with levels {0, 1, r}.
// Pulse 1 drives 0 <-> r with wavevector k1: excitation of an atom at r
// picks up e^{+i k1.r}. Pulse 2 drives r <-> 1 with wavevector k2:
// de-excitation to 1 picks up e^{-i k2.r}. For k1 == k2 the position phases
// cancel and the blockaded collective pi pulse followed by a single-atom pi
// pulse leaves (|10> + |01>)/sqrt(2) up to a global phase.

namespace rydberg {

struct PulseConfig {
    double omega_mhz = 0.0;
    Vec3 k_eff = Vec3::Zero();
    double duration_ns = 0.0;
};

struct ProtocolConfig {
    PulseConfig excitation; // 0 <-> r
    PulseConfig transfer;   // r <-> 1
    GeometryConfig geometry;
    std::vector<ChannelSpec> channels{ChannelSpec{}};
    NoiseModel noise;
    /// Diagnostic: draw fresh positions before pulse 2, i.e. let the atoms
    /// move between the pulses.
    bool resample_positions = false;

    void validate() const;

    /// Both pulses use the two-photon coupling of `lasers`; pulse 1 lasts a
    /// collective pi pulse 1/(2 sqrt(2) Omega), pulse 2 a single-atom pi pulse.
    static ProtocolConfig matched(const LaserConfig& lasers, const GeometryConfig& geometry);
};

/// Labels "00","01","0r","10","11","1r","r0","r1","rr" (first symbol: atom a).
const Basis& protocol_basis();
/// (|10> + |01>) / sqrt(2)
StateVector bell_target();

HermitianOperator build_excitation_hamiltonian(const PulseConfig& pulse, const ShotParams& shot,
                                               const InteractionChannel& channel);
HermitianOperator build_transfer_hamiltonian(const PulseConfig& pulse, const ShotParams& shot,
                                             const InteractionChannel& channel);

/// Final state from |00> for one shot. `second` supplies the positions used
/// during pulse 2; it equals `first` unless positions are resampled.
StateVector protocol_final_state(const ProtocolConfig& config, const ShotParams& first,
                                 const ShotParams& second);

struct ProtocolShot {
    double fidelity = 0.0;            // |<Bell|psi>|^2 / P(ground manifold)
    double manifold_population = 0.0; // population of {0,1}x{0,1}
};

ProtocolShot evaluate_protocol(const StateVector& final_state);

struct ProtocolResult {
    double mean_fidelity = 0.0;
    double mean_manifold_population = 0.0;
    double fidelity_stddev = 0.0;
    std::vector<double> fidelities;
    std::vector<double> manifold_populations;
};

ProtocolResult run_protocol(const ProtocolConfig& config, int n_shots, std::uint64_t seed,
                            Execution execution = Execution::parallel);

} // namespace rydberg
