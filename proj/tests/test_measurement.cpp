#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "rydberg/error.hpp"
#include "rydberg/measurement.hpp"

using namespace rydberg;

namespace {

ExperimentConfig noiseless(Mode mode, double separation_um) {
    ExperimentConfig c;
    c.geometry.separation_um = separation_um;
    c.mode = mode;
    c.durations_ns = duration_grid(0.0, 500.0, 10.0);
    return c;
}

double half_period_ns() { return 1e3 / (2.0 * two_photon_rabi(LaserConfig{}).omega_mhz); }

} // namespace

TEST_CASE("outcome_probabilities") {
    const auto gg = StateVector::basis_state(two_atom_basis(), "gg");
    const auto p = outcome_probabilities(gg);
    CHECK(p.gg == 1.0);
    CHECK(p.rr == 0.0);

    CVector v(4);
    v << 0.0, 1.0, 1.0, 0.0;
    const auto q = outcome_probabilities(StateVector::normalized(two_atom_basis(), v));
    CHECK(q.rg == doctest::Approx(0.5));
    CHECK(q.gr == doctest::Approx(0.5));

    CHECK_THROWS_AS(outcome_probabilities(StateVector::basis_state(single_atom_basis(), "g")),
                    BasisMismatchError);
}

TEST_CASE("detect") {
    RngStream rng(1, 0);
    const OutcomeProbabilities rr{0.0, 0.0, 0.0, 1.0};
    const OutcomeProbabilities gg{};
    for (int i = 0; i < 1000; ++i) {
        const auto d = detect(rr, DetectionParams{1.0, 0.0}, rng);
        CHECK(d.lost_a);
        CHECK(d.lost_b);
        const auto e = detect(gg, DetectionParams{1.0, 0.0}, rng);
        CHECK_FALSE(e.lost_a);
        CHECK_FALSE(e.lost_b);
    }
    int lost = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) lost += detect(gg, DetectionParams{1.0, 0.1}, rng).lost_a;
    CHECK(std::abs(lost / static_cast<double>(n) - 0.1) < 0.01);

    // a rounded-down total must not fall through to an impossible outcome
    const OutcomeProbabilities skewed{0.0, 1.0 - 1e-17, 0.0, 0.0};
    for (int i = 0; i < 100; ++i) {
        const auto d = detect(skewed, DetectionParams{1.0, 0.0}, rng);
        CHECK(d.lost_a);
        CHECK_FALSE(d.lost_b);
    }
}

TEST_CASE("observables and data set validation") {
    CHECK(parse_observable("p_exactly_one") == Observable::p_exactly_one);
    CHECK(to_string(Observable::p_both) == "p_both");
    CHECK_THROWS_AS(parse_observable("p_c"), LookupError);
    CHECK(parse_mode("single-atom-b") == Mode::single_atom_b);
    CHECK_THROWS_AS(parse_mode("three-atom"), ConfigError);

    DataSet d;
    d.rows.push_back({0.0, 0.5});
    d.rows.push_back({10.0, 0.5});
    CHECK_NOTHROW(d.validate());
    d.rows[1].p_both = 1.5;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.rows[1].p_both = 0.0;
    d.rows[1].err_a = -0.1;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.rows[1].err_a = 0.0;
    d.rows[1].duration_ns = 0.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("duration_grid") {
    const auto g = duration_grid(0.0, 500.0, 10.0);
    CHECK(g.size() == 51);
    CHECK(g.back() == 500.0);
    CHECK(duration_grid(0.0, 0.95, 0.1).size() == 10);
    CHECK_THROWS_AS(duration_grid(0.0, 10.0, 0.0), ConfigError);
}

TEST_CASE("config validation") {
    auto c = noiseless(Mode::two_atom, 4.0);
    c.n_shots = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = noiseless(Mode::two_atom, 4.0);
    c.durations_ns = {10.0, 5.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = noiseless(Mode::two_atom, 4.0);
    c.channels = {{1.0, true, 0.5}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = noiseless(Mode::two_atom, 4.0);
    c.detection.p_loss_given_ground = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("noiseless pi pulse loses atom a every time") {
    auto c = noiseless(Mode::single_atom_a, 18.0);
    const std::vector<double> t{half_period_ns()};
    const auto d = run_experiment(c, t, 200, 3, Execution::serial);
    CHECK(d.rows[0].p_a == 1.0);
    CHECK(d.rows[0].p_b == 0.0);
    CHECK(d.rows[0].err_a == 0.0);
    CHECK(d.rows[0].n_shots == 200);

    c.mode = Mode::single_atom_b;
    const auto e = run_experiment(c, t, 200, 3, Execution::serial);
    CHECK(e.rows[0].p_b == 1.0);
    CHECK(e.rows[0].p_a == 0.0);
}

TEST_CASE("rows are consistent by counting") {
    auto c = noiseless(Mode::two_atom, 3.6);
    c.noise = NoiseModel::experiment();
    c.detection = {0.95, 0.05};
    const auto d = run_experiment(c, c.durations_ns, 100, 17, Execution::serial);
    CHECK_NOTHROW(d.validate());
    for (const auto& r : d.rows) {
        // p_a + p_b = 2 p_both + p_exactly_one, all counts out of n
        CHECK(std::abs(r.p_a + r.p_b - 2.0 * r.p_both - r.p_exactly_one) < 1e-12);
        CHECK(r.p_both <= std::min(r.p_a, r.p_b));
        const double count = r.p_a * r.n_shots;
        CHECK(std::abs(count - std::round(count)) < 1e-9);
        CHECK(r.err_a == doctest::Approx(std::sqrt(r.p_a * (1 - r.p_a) / r.n_shots)));
    }
}

TEST_CASE("serial and parallel runs are bit-identical and reproducible") {
    auto c = noiseless(Mode::two_atom, 3.6);
    c.noise = NoiseModel::experiment();
    c.channels = {{1.0, true, 0.8}, {0.1, true, 0.2}};
    const auto serial = run_experiment(c, c.durations_ns, 64, 2008, Execution::serial);
    const auto parallel = run_experiment(c, c.durations_ns, 64, 2008, Execution::parallel);
    CHECK(serial == parallel);
    CHECK(serial == run_experiment(c, c.durations_ns, 64, 2008, Execution::serial));
    CHECK_FALSE(serial == run_experiment(c, c.durations_ns, 64, 2009, Execution::serial));

    c.durations_ns = {100.0, 200.0};
    CHECK(expected_probabilities(c, 300, Execution::serial) ==
          expected_probabilities(c, 300, Execution::parallel));
}

TEST_CASE("distant atoms are independent") {
    auto c = noiseless(Mode::two_atom, 18.0);
    c.durations_ns = {37.0, 73.0, 111.0};
    const auto d = expected_probabilities(c, 1, Execution::serial);
    for (const auto& r : d.rows) {
        CHECK(r.p_both == doctest::Approx(r.p_a * r.p_b).epsilon(0.02));
    }
}

TEST_CASE("Monte Carlo converges to the expectation") {
    auto c = noiseless(Mode::two_atom, 3.6);
    c.noise = NoiseModel::experiment();
    c.detection = {0.95, 0.05};
    c.durations_ns = {40.0, 110.0};
    const auto expected = expected_probabilities(c, 20000, Execution::parallel);
    const auto mc = run_experiment(c, c.durations_ns, 100000, 5, Execution::parallel);
    for (std::size_t i = 0; i < mc.rows.size(); ++i) {
        for (auto o : {Observable::p_a, Observable::p_b, Observable::p_both,
                       Observable::p_exactly_one}) {
            const double se = std::hypot(mc.rows[i].error(o), expected.rows[i].error(o));
            CHECK(std::abs(mc.rows[i].value(o) - expected.rows[i].value(o)) < 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("CSV round trip") {
    auto c = noiseless(Mode::two_atom, 3.6);
    c.noise = NoiseModel::experiment();
    const auto d = run_experiment(c, c.durations_ns, 50, 1, Execution::serial);
    std::stringstream ss;
    write_csv(d, ss);
    const std::string text = ss.str();
    CHECK(text.rfind("duration_ns,p_a,p_b,p_both,p_exactly_one,err_a,err_b,err_both,"
                     "err_exactly_one,n_shots\n",
                     0) == 0);
    std::istringstream in(text);
    const auto back = read_csv(in);
    REQUIRE(back.rows.size() == d.rows.size());
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        CHECK(back.rows[i].duration_ns == d.rows[i].duration_ns);
        CHECK(back.rows[i].p_a == doctest::Approx(d.rows[i].p_a).epsilon(1e-6));
        CHECK(back.rows[i].err_both == doctest::Approx(d.rows[i].err_both).epsilon(1e-5));
        CHECK(back.rows[i].n_shots == 50);
    }
}

TEST_CASE("read_csv errors and partial columns") {
    std::istringstream minimal("p_a,duration_ns\n0.1,0\n0.2,10\n");
    const auto d = read_csv(minimal);
    REQUIRE(d.rows.size() == 2);
    CHECK(d.rows[1].p_a == doctest::Approx(0.2));
    CHECK(d.rows[1].duration_ns == 10.0);
    CHECK(d.rows[1].err_a == 0.0);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), IoError);
    std::istringstream no_duration("p_a\n0.1\n");
    CHECK_THROWS_AS(read_csv(no_duration), IoError);
    std::istringstream bad_number("duration_ns,p_a\n0,abc\n");
    CHECK_THROWS_AS(read_csv(bad_number), IoError);
    std::istringstream short_row("duration_ns,p_a\n0\n");
    CHECK_THROWS_AS(read_csv(short_row), IoError);
}
