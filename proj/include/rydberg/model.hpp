#pragma once

#include <span>

#include "rydberg/quantum.hpp"
#include "rydberg/shot.hpp"
#include "rydberg/units.hpp"

// Hamiltonians of the two-photon Rydberg excitation.
//
// Frame and sign convention: everything is written in the frame rotating at
// the two-photon laser frequency, so the bare ground-Rydberg energy drops
// out. A positive detuning delta_nu (laser above resonance) lowers the
// rotating-frame energy of every Rydberg excitation by delta_nu:
//   H/hbar  =  sum_atoms [ (s Omega / 2) e^{i k.r} |r><g| + h.c. ]
//            - delta_nu * (number of Rydberg excitations)
//            + shift * |rr><rr|
// with all entries converted from MHz to rad/us.

namespace rydberg {

struct LaserConfig {
    double omega_r_mhz = 260.0;             // 795 nm leg single-photon Rabi frequency
    double omega_b_mhz = 21.0;              // 474 nm leg
    double delta_intermediate_mhz = 400.0;  // blue detuning from 5p1/2
    double two_photon_detuning_mhz = 0.0;
    double lambda_r_um = 0.795;
    double lambda_b_um = 0.474;
    Vec3 dir_r = Vec3::UnitX();
    Vec3 dir_b = Vec3::UnitZ();

    /// Throws ConfigError.
    void validate() const;
};

struct InteractionChannel {
    double shift_mhz = 0.0; // shift of the doubly excited level, sign allowed
    double weight = 1.0;
};

/// Throws ConfigError unless the list is non-empty, weights are in [0, 1]
/// and sum to 1 within 1e-9.
void validate_channels(std::span<const InteractionChannel> channels);

struct GeometryConfig {
    double separation_um = 4.0;
    Vec3 axis = Vec3::UnitZ(); // interatomic axis, along the quantization axis
    double c3_mhz_um3 = 3200.0;

    void validate() const;
};

struct EffectiveCoupling {
    double omega_mhz = 0.0;    // two-photon Rabi frequency
    double detuning_mhz = 0.0; // static two-photon detuning
    Vec3 k_eff = Vec3::Zero(); // rad/um
};

enum class Atom { a, b };

/// Omega = Omega_R Omega_B / (2 delta), k_eff = k_R + k_B.
EffectiveCoupling two_photon_rabi(const LaserConfig& lasers);

/// Delta E = C3 / R^3 in MHz.
double interaction_shift(const GeometryConfig& geometry);

/// Distance at which C3 / R^3 equals omega.
double blockade_radius(double c3_mhz_um3, double omega_mhz);

const Basis& single_atom_basis(); // g, r
const Basis& two_atom_basis();    // gg, rg, gr, rr  (first letter: atom a)
const Basis& three_level_basis(); // g, p, r

HermitianOperator build_two_atom_hamiltonian(const EffectiveCoupling& coupling,
                                             const ShotParams& shot,
                                             const InteractionChannel& channel);

HermitianOperator build_single_atom_hamiltonian(const EffectiveCoupling& coupling,
                                                const ShotParams& shot,
                                                Atom atom);

/// Ground, intermediate and Rydberg levels with both laser legs explicit.
/// The Rydberg diagonal includes the differential light shift
/// (Omega_B^2 - Omega_R^2) / (4 delta), so a zero two-photon detuning means
/// resonance with the light-shifted transition.
HermitianOperator build_three_level_hamiltonian(const LaserConfig& lasers);

} // namespace rydberg
