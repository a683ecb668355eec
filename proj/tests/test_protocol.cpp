#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rydberg/error.hpp"
#include "rydberg/protocol.hpp"

using namespace rydberg;

namespace {

ProtocolConfig blockaded() {
    GeometryConfig g;
    g.separation_um = 3.6;
    auto p = ProtocolConfig::matched(LaserConfig{}, g);
    // essentially perfect blockade
    p.channels = {{1e3 * p.excitation.omega_mhz, false, 1.0}};
    return p;
}

NoiseModel thermal_only() {
    const auto full = NoiseModel::experiment();
    NoiseModel n;
    n.temperature_uk = full.temperature_uk;
    n.sigma_longitudinal_um = full.sigma_longitudinal_um;
    n.sigma_radial_um = full.sigma_radial_um;
    n.longitudinal_axis = full.longitudinal_axis;
    return n;
}

ShotParams at(const Vec3& ra, const Vec3& rb) {
    ShotParams s;
    s.r_a = ra;
    s.r_b = rb;
    return s;
}

} // namespace

TEST_CASE("basis and target") {
    CHECK(protocol_basis().size() == 9);
    CHECK(protocol_basis().label(2) == "0r");
    const auto b = bell_target();
    CHECK(std::norm(b.amplitude("10")) == doctest::Approx(0.5));
    CHECK(std::norm(b.amplitude("01")) == doctest::Approx(0.5));
    CHECK(b.norm() == doctest::Approx(1.0));
}

TEST_CASE("matched pulse durations") {
    const auto p = blockaded();
    const double omega = 6.825;
    CHECK(p.excitation.duration_ns == doctest::Approx(1e3 / (2.0 * std::sqrt(2.0) * omega)));
    CHECK(p.transfer.duration_ns == doctest::Approx(1e3 / (2.0 * omega)));
    CHECK(p.excitation.k_eff == p.transfer.k_eff);

    auto bad = p;
    bad.transfer.duration_ns = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    LaserConfig dark;
    dark.omega_b_mhz = 0.0;
    CHECK_THROWS_AS(ProtocolConfig::matched(dark, GeometryConfig{}), ConfigError);
}

TEST_CASE("Hamiltonians are Hermitian") {
    const auto p = blockaded();
    const auto s = at(Vec3(0.3, -0.2, -1.8), Vec3(0.1, 0.4, 1.8));
    const InteractionChannel ch{68.6, 1.0};
    for (const auto& h : {build_excitation_hamiltonian(p.excitation, s, ch),
                          build_transfer_hamiltonian(p.transfer, s, ch)}) {
        CHECK((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("matched wavevectors erase the position phase") {
    const auto p = blockaded();
    std::mt19937_64 rng(21);
    std::normal_distribution<double> pos(0.0, 0.5);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        const auto s = at(Vec3(pos(rng), pos(rng), -1.8 + pos(rng)),
                          Vec3(pos(rng), pos(rng), 1.8 + pos(rng)));
        const auto shot = evaluate_protocol(protocol_final_state(p, s, s));
        CHECK(shot.fidelity >= 0.999);
        CHECK(shot.manifold_population >= 0.999);
        sum += shot.fidelity;
        sum2 += shot.fidelity * shot.fidelity;
    }
    const double mean = sum / n;
    CHECK(sum2 / n - mean * mean < 1e-8);

    const auto r = run_protocol(p, 100, 1);
    CHECK(r.mean_fidelity >= 0.999);
    CHECK(r.fidelities.size() == 100);
}

TEST_CASE("zero-duration transfer leaves the collective Rabi population") {
    auto p = blockaded();
    p.transfer.duration_ns = 0.0;
    const double omega = p.excitation.omega_mhz;
    const auto s = at(Vec3(0, 0, -1.8), Vec3(0, 0, 1.8));
    for (double t_ns : {0.0, 20.0, 51.8, 80.0, 140.0}) {
        p.excitation.duration_ns = t_ns;
        const auto psi = protocol_final_state(p, s, s);
        const double single = population(psi, "0r") + population(psi, "r0");
        const double expected =
            std::pow(std::sin(std::sqrt(2.0) * std::numbers::pi * omega * t_ns * 1e-3), 2);
        CHECK(std::abs(single - expected) < 1e-3);
    }
}

TEST_CASE("dephased variants average to one half") {
    GeometryConfig g;
    g.separation_um = 3.6;

    SUBCASE("no transfer wavevector") {
        auto p = ProtocolConfig::matched(LaserConfig{}, g);
        p.transfer.k_eff = Vec3::Zero();
        p.noise = thermal_only();
        const auto r = run_protocol(p, 10000, 7);
        CHECK(std::abs(r.mean_fidelity - 0.5) < 0.02);
    }
    SUBCASE("positions resampled between the pulses") {
        auto p = ProtocolConfig::matched(LaserConfig{}, g);
        p.noise = thermal_only();
        p.resample_positions = true;
        const auto r = run_protocol(p, 10000, 7);
        CHECK(std::abs(r.mean_fidelity - 0.5) < 0.02);
    }
}

TEST_CASE("serial and parallel protocol runs agree exactly") {
    GeometryConfig g;
    g.separation_um = 3.6;
    auto p = ProtocolConfig::matched(LaserConfig{}, g);
    p.noise = NoiseModel::experiment();
    const auto a = run_protocol(p, 300, 11, Execution::serial);
    const auto b = run_protocol(p, 300, 11, Execution::parallel);
    CHECK(a.fidelities == b.fidelities);
    CHECK(a.mean_fidelity == b.mean_fidelity);
    CHECK(a.manifold_populations == b.manifold_populations);
}
