#include <doctest.h>

#include <cmath>
#include <vector>

#include "rydberg/error.hpp"
#include "rydberg/sampler.hpp"

using namespace rydberg;

namespace {

struct Moments {
    double n = 0, sum = 0, sum2 = 0;
    void add(double x) {
        n += 1;
        sum += x;
        sum2 += x * x;
    }
    double mean() const { return sum / n; }
    double stddev() const { return std::sqrt(sum2 / n - mean() * mean()); }
};

const std::vector<InteractionChannel> one_channel{{50.0, 1.0}};

} // namespace

TEST_CASE("position_sigma conventions") {
    CHECK(position_sigma(0.2, AmplitudeConvention::turning_point) ==
          doctest::Approx(0.2 / std::sqrt(2.0)));
    CHECK(position_sigma(0.2, AmplitudeConvention::rms) == 0.2);
}

TEST_CASE("noise validation") {
    NoiseModel n;
    n.pumping_efficiency = 1.1;
    CHECK_THROWS_AS(n.validate(), ConfigError);
    n = NoiseModel{};
    n.intensity_rms = -0.1;
    CHECK_THROWS_AS(n.validate(), ConfigError);
    n = NoiseModel{};
    n.sigma_radial_um = -1.0;
    CHECK_THROWS_AS(n.validate(), ConfigError);
    CHECK_NOTHROW(NoiseModel::experiment().validate());
}

TEST_CASE("noise off reproduces the nominal configuration") {
    GeometryConfig g;
    g.separation_um = 3.6;
    const auto [ra, rb] = nominal_positions(g);
    CHECK((rb - ra - Vec3(0, 0, 3.6)).norm() < 1e-15);
    RngStream rng(5, 0);
    for (int i = 0; i < 100; ++i) {
        const auto s = sample_shot(NoiseModel::none(), g, one_channel, rng);
        ShotParams nominal;
        nominal.r_a = ra;
        nominal.r_b = rb;
        CHECK(s == nominal);
    }
}

TEST_CASE("streams are deterministic and distinct") {
    const auto noise = NoiseModel::experiment();
    const GeometryConfig g;
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    const auto sa = sample_shot(noise, g, one_channel, a);
    CHECK(sa == sample_shot(noise, g, one_channel, b));
    CHECK_FALSE(sa == sample_shot(noise, g, one_channel, c));
    CHECK_FALSE(sa == sample_shot(noise, g, one_channel, d));
    CHECK(shot_stream(2, 5, 100) == 205);
}

TEST_CASE("sampled moments match the noise model") {
    const auto noise = NoiseModel::experiment();
    GeometryConfig g;
    g.separation_um = 3.6;
    const auto [ra, rb] = nominal_positions(g);
    const Vec3 k(two_pi / 0.795, 0.0, two_pi / 0.474);
    const int n = 100000;
    Moments nu, inten, ax, ay, az, bz, phi;
    int pumped_a = 0, both = 0;
    RngStream rng(2008, 0);
    for (int i = 0; i < n; ++i) {
        const auto s = sample_shot(noise, g, one_channel, rng);
        nu.add(s.delta_nu_mhz);
        inten.add(s.intensity_scale);
        CHECK(s.intensity_scale > 0.0);
        ax.add(s.r_a.x() - ra.x());
        ay.add(s.r_a.y() - ra.y());
        az.add(s.r_a.z() - ra.z());
        bz.add(s.r_b.z() - rb.z());
        phi.add(frozen_phase(s, k));
        pumped_a += s.pumped_a;
        both += s.pumped_a && s.pumped_b;
    }
    const double tol = 3.0 / std::sqrt(static_cast<double>(n));
    const double sr = 0.2 / std::sqrt(2.0), sl = 0.8 / std::sqrt(2.0);

    CHECK(std::abs(nu.mean()) < 1.0 * tol);
    CHECK(std::abs(nu.stddev() / 1.0 - 1.0) < 2.0 * tol);
    CHECK(std::abs(inten.mean() - 1.0) < 0.05 * tol);
    CHECK(std::abs(inten.stddev() / 0.05 - 1.0) < 2.0 * tol);
    CHECK(std::abs(ax.stddev() / sr - 1.0) < 2.0 * tol);
    CHECK(std::abs(ay.stddev() / sl - 1.0) < 2.0 * tol);
    CHECK(std::abs(az.stddev() / sr - 1.0) < 2.0 * tol);
    CHECK(std::abs(bz.stddev() / sr - 1.0) < 2.0 * tol);
    CHECK(std::abs(ay.mean()) < sl * tol);

    const double p = static_cast<double>(pumped_a) / n;
    CHECK(std::abs(p - 0.9) < 3.0 * std::sqrt(0.9 * 0.1 / n));
    const double pb = static_cast<double>(both) / n;
    CHECK(std::abs(pb - 0.81) < 3.0 * std::sqrt(0.81 * 0.19 / n));

    // k lies in the radial plane, so phi spreads as sqrt(2) sigma_radial |k|.
    const double phi_sigma = std::sqrt(2.0) * sr * k.norm();
    CHECK(std::abs(phi.stddev() / phi_sigma - 1.0) < 2.0 * tol);
    CHECK(std::abs(phi.mean() - k.dot(ra - rb)) < phi_sigma * tol);
}

TEST_CASE("frozen_phase") {
    const Vec3 k(two_pi / 0.795, 0.0, two_pi / 0.474);
    ShotParams s;
    CHECK(frozen_phase(s, k) == 0.0);
    s.r_a = Vec3(0, 0, 0);
    s.r_b = Vec3(0, 0, 3.6);
    CHECK(frozen_phase(s, k) == doctest::Approx(-two_pi / 0.474 * 3.6));
    CHECK(std::abs(frozen_phase(s, k)) == doctest::Approx(47.72).epsilon(1e-3));
    ShotParams swapped = s;
    std::swap(swapped.r_a, swapped.r_b);
    CHECK(frozen_phase(swapped, k) == doctest::Approx(-frozen_phase(s, k)));
}

TEST_CASE("channel selection follows the weights") {
    const std::vector<InteractionChannel> channels{{50.0, 0.7}, {10.0, 0.2}, {-5.0, 0.1}};
    const GeometryConfig g;
    RngStream rng(9, 1);
    std::vector<int> count(3, 0);
    const int n = 50000;
    for (int i = 0; i < n; ++i) ++count[sample_shot(NoiseModel::none(), g, channels, rng).channel_index];
    for (std::size_t c = 0; c < 3; ++c) {
        const double w = channels[c].weight;
        CHECK(std::abs(count[c] / static_cast<double>(n) - w) < 4.0 * std::sqrt(w * (1 - w) / n));
    }
}
