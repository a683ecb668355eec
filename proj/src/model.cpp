#include "rydberg/model.hpp"

#include <cmath>

#include "rydberg/error.hpp"

namespace rydberg {

namespace {

bool unit_vector(const Vec3& v) { return std::abs(v.norm() - 1.0) <= 1e-12; }

Complex coupling_element(double omega_mhz, double scale, const Vec3& k, const Vec3& r) {
    return std::polar(0.5 * angular(scale * omega_mhz), k.dot(r));
}

} // namespace

void LaserConfig::validate() const {
    if (!(omega_r_mhz >= 0.0) || !(omega_b_mhz >= 0.0)) {
        throw ConfigError("laser Rabi frequencies must be >= 0");
    }
    if (delta_intermediate_mhz == 0.0 || !std::isfinite(delta_intermediate_mhz)) {
        throw ConfigError("intermediate-state detuning must be finite and non-zero");
    }
    if (!std::isfinite(two_photon_detuning_mhz)) {
        throw ConfigError("two-photon detuning must be finite");
    }
    if (!(lambda_r_um > 0.0) || !(lambda_b_um > 0.0)) {
        throw ConfigError("wavelengths must be > 0");
    }
    if (!unit_vector(dir_r) || !unit_vector(dir_b)) {
        throw ConfigError("laser propagation directions must be unit vectors");
    }
}

void validate_channels(std::span<const InteractionChannel> channels) {
    if (channels.empty()) {
        throw ConfigError("at least one interaction channel is required");
    }
    double total = 0.0;
    for (const auto& c : channels) {
        if (!(c.weight >= 0.0 && c.weight <= 1.0) || !std::isfinite(c.shift_mhz)) {
            throw ConfigError("channel weights must lie in [0, 1] and shifts be finite");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("channel weights must sum to 1");
    }
}

void GeometryConfig::validate() const {
    if (!(separation_um > 0.0) || !std::isfinite(separation_um)) {
        throw ConfigError("separation must be > 0");
    }
    if (!(c3_mhz_um3 >= 0.0)) {
        throw ConfigError("C3 must be >= 0");
    }
    if (!unit_vector(axis)) {
        throw ConfigError("interatomic axis must be a unit vector");
    }
}

EffectiveCoupling two_photon_rabi(const LaserConfig& lasers) {
    lasers.validate();
    EffectiveCoupling c;
    c.omega_mhz = lasers.omega_r_mhz * lasers.omega_b_mhz /
                  (2.0 * std::abs(lasers.delta_intermediate_mhz));
    c.detuning_mhz = lasers.two_photon_detuning_mhz;
    c.k_eff = (two_pi / lasers.lambda_r_um) * lasers.dir_r +
              (two_pi / lasers.lambda_b_um) * lasers.dir_b;
    return c;
}

double interaction_shift(const GeometryConfig& geometry) {
    geometry.validate();
    const double r = geometry.separation_um;
    return geometry.c3_mhz_um3 / (r * r * r);
}

double blockade_radius(double c3_mhz_um3, double omega_mhz) {
    if (!(omega_mhz > 0.0)) {
        throw ConfigError("blockade radius needs a positive Rabi frequency");
    }
    if (!(c3_mhz_um3 >= 0.0)) {
        throw ConfigError("C3 must be >= 0");
    }
    return std::cbrt(c3_mhz_um3 / omega_mhz);
}

const Basis& single_atom_basis() {
    static const Basis basis({"g", "r"});
    return basis;
}

const Basis& two_atom_basis() {
    static const Basis basis({"gg", "rg", "gr", "rr"});
    return basis;
}

const Basis& three_level_basis() {
    static const Basis basis({"g", "p", "r"});
    return basis;
}

HermitianOperator build_two_atom_hamiltonian(const EffectiveCoupling& coupling,
                                             const ShotParams& shot,
                                             const InteractionChannel& channel) {
    enum { gg, rg, gr, rr };
    // An unpumped atom sits in another Zeeman level, far from resonance.
    const Complex ca = shot.pumped_a
        ? coupling_element(coupling.omega_mhz, shot.intensity_scale, coupling.k_eff, shot.r_a)
        : Complex{};
    const Complex cb = shot.pumped_b
        ? coupling_element(coupling.omega_mhz, shot.intensity_scale, coupling.k_eff, shot.r_b)
        : Complex{};
    const double detuning = angular(coupling.detuning_mhz + shot.delta_nu_mhz);

    CMatrix h = CMatrix::Zero(4, 4);
    h(rg, gg) = ca;
    h(rr, gr) = ca;
    h(gr, gg) = cb;
    h(rr, rg) = cb;
    h(gg, rg) = std::conj(ca);
    h(gr, rr) = std::conj(ca);
    h(gg, gr) = std::conj(cb);
    h(rg, rr) = std::conj(cb);
    h(rg, rg) = -detuning;
    h(gr, gr) = -detuning;
    h(rr, rr) = -2.0 * detuning + angular(channel.shift_mhz);
    return HermitianOperator(two_atom_basis(), std::move(h));
}

HermitianOperator build_single_atom_hamiltonian(const EffectiveCoupling& coupling,
                                                const ShotParams& shot,
                                                Atom atom) {
    const bool pumped = atom == Atom::a ? shot.pumped_a : shot.pumped_b;
    const Vec3& r = atom == Atom::a ? shot.r_a : shot.r_b;
    const Complex c = pumped
        ? coupling_element(coupling.omega_mhz, shot.intensity_scale, coupling.k_eff, r)
        : Complex{};

    CMatrix h = CMatrix::Zero(2, 2);
    h(1, 0) = c;
    h(0, 1) = std::conj(c);
    h(1, 1) = -angular(coupling.detuning_mhz + shot.delta_nu_mhz);
    return HermitianOperator(single_atom_basis(), std::move(h));
}

HermitianOperator build_three_level_hamiltonian(const LaserConfig& lasers) {
    lasers.validate();
    const double delta = lasers.delta_intermediate_mhz;
    const double light_shift =
        (lasers.omega_b_mhz * lasers.omega_b_mhz - lasers.omega_r_mhz * lasers.omega_r_mhz) /
        (4.0 * delta);

    CMatrix h = CMatrix::Zero(3, 3);
    h(0, 1) = h(1, 0) = 0.5 * angular(lasers.omega_r_mhz);
    h(1, 2) = h(2, 1) = 0.5 * angular(lasers.omega_b_mhz);
    h(1, 1) = angular(delta);
    h(2, 2) = angular(light_shift - lasers.two_photon_detuning_mhz);
    return HermitianOperator(three_level_basis(), std::move(h));
}

} // namespace rydberg
