#include "rydberg/measurement.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "rydberg/error.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::single_atom_a: return "single-atom-a";
    case Mode::single_atom_b: return "single-atom-b";
    case Mode::two_atom: return "two-atom";
    }
    return "two-atom";
}

Mode parse_mode(std::string_view name) {
    if (name == "single-atom-a") return Mode::single_atom_a;
    if (name == "single-atom-b") return Mode::single_atom_b;
    if (name == "two-atom") return Mode::two_atom;
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::vector<InteractionChannel> resolve_channels(std::span<const ChannelSpec> specs,
                                                 const GeometryConfig& geometry) {
    const double dominant = interaction_shift(geometry);
    std::vector<InteractionChannel> out;
    out.reserve(specs.size());
    for (const auto& s : specs) {
        out.push_back({s.relative ? s.shift * dominant : s.shift, s.weight});
    }
    return out;
}

void DetectionParams::validate() const {
    if (!(p_loss_given_rydberg >= 0.0 && p_loss_given_rydberg <= 1.0) ||
        !(p_loss_given_ground >= 0.0 && p_loss_given_ground <= 1.0)) {
        throw ConfigError("detection probabilities must lie in [0, 1]");
    }
}

void ExperimentConfig::validate() const {
    lasers.validate();
    geometry.validate();
    noise.validate();
    detection.validate();
    validate_channels(resolve_channels(channels, geometry));
    if (durations_ns.empty()) {
        throw ConfigError("at least one pulse duration is required");
    }
    for (std::size_t i = 0; i < durations_ns.size(); ++i) {
        if (!(durations_ns[i] >= 0.0) || !std::isfinite(durations_ns[i])) {
            throw ConfigError("durations must be finite and >= 0");
        }
        if (i > 0 && !(durations_ns[i] > durations_ns[i - 1])) {
            throw ConfigError("durations must be strictly increasing");
        }
    }
    if (n_shots < 1) {
        throw ConfigError("n_shots must be >= 1");
    }
}

std::vector<double> duration_grid(double start_ns, double stop_ns, double step_ns) {
    if (!(step_ns > 0.0) || !(stop_ns >= start_ns)) {
        throw ConfigError("duration grid needs step > 0 and stop >= start");
    }
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop_ns - start_ns) / step_ns + 1e-9));
    for (long i = 0; i <= n; ++i) {
        out.push_back(start_ns + static_cast<double>(i) * step_ns);
    }
    return out;
}

OutcomeProbabilities outcome_probabilities(const StateVector& final_state) {
    if (!(final_state.basis() == two_atom_basis())) {
        throw BasisMismatchError("outcome probabilities need the two-atom basis");
    }
    const auto& v = final_state.amplitudes();
    return {std::norm(v(0)), std::norm(v(1)), std::norm(v(2)), std::norm(v(3))};
}

Detection detect(const OutcomeProbabilities& p, const DetectionParams& detection,
                 RngStream& rng) {
    const double x = rng.uniform();
    const double ua = rng.uniform();
    const double ub = rng.uniform();

    // Outcomes in basis order gg, rg, gr, rr. If x lands past the rounded
    // total, take the last outcome with non-zero probability.
    const std::array<double, 4> weight{p.gg, p.rg, p.gr, p.rr};
    int outcome = 0;
    double cumulative = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (weight[k] > 0.0) outcome = k;
    }
    for (int k = 0; k < 4; ++k) {
        cumulative += weight[k];
        if (x < cumulative && weight[k] > 0.0) {
            outcome = k;
            break;
        }
    }
    const bool rydberg_a = outcome == 1 || outcome == 3;
    const bool rydberg_b = outcome == 2 || outcome == 3;

    auto loss = [&](bool rydberg) {
        return rydberg ? detection.p_loss_given_rydberg : detection.p_loss_given_ground;
    };
    return {ua < loss(rydberg_a), ub < loss(rydberg_b)};
}

std::string_view to_string(Observable which) {
    switch (which) {
    case Observable::p_a: return "p_a";
    case Observable::p_b: return "p_b";
    case Observable::p_both: return "p_both";
    case Observable::p_exactly_one: return "p_exactly_one";
    }
    return "p_a";
}

Observable parse_observable(std::string_view name) {
    if (name == "p_a") return Observable::p_a;
    if (name == "p_b") return Observable::p_b;
    if (name == "p_both") return Observable::p_both;
    if (name == "p_exactly_one") return Observable::p_exactly_one;
    throw LookupError("unknown observable '" + std::string(name) + "'");
}

double DataRow::value(Observable which) const {
    switch (which) {
    case Observable::p_a: return p_a;
    case Observable::p_b: return p_b;
    case Observable::p_both: return p_both;
    case Observable::p_exactly_one: return p_exactly_one;
    }
    return p_a;
}

double DataRow::error(Observable which) const {
    switch (which) {
    case Observable::p_a: return err_a;
    case Observable::p_b: return err_b;
    case Observable::p_both: return err_both;
    case Observable::p_exactly_one: return err_exactly_one;
    }
    return err_a;
}

std::vector<double> DataSet::durations() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.duration_ns);
    return out;
}

std::vector<double> DataSet::values(Observable which) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.value(which));
    return out;
}

std::vector<double> DataSet::errors(Observable which) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.error(which));
    return out;
}

void DataSet::validate() const {
    constexpr std::array all{Observable::p_a, Observable::p_b, Observable::p_both,
                             Observable::p_exactly_one};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        for (auto o : all) {
            if (!(r.value(o) >= 0.0 && r.value(o) <= 1.0)) {
                throw ValidationError("probability outside [0, 1]");
            }
            if (!(r.error(o) >= 0.0)) {
                throw ValidationError("negative standard error");
            }
        }
        if (i > 0 && !(r.duration_ns > rows[i - 1].duration_ns)) {
            throw ValidationError("durations must be strictly increasing");
        }
    }
}

namespace {

struct Prepared {
    EffectiveCoupling coupling;
    std::vector<InteractionChannel> channels;
};

Prepared prepare(const ExperimentConfig& config) {
    config.validate();
    return {two_photon_rabi(config.lasers), resolve_channels(config.channels, config.geometry)};
}

bool has_atom_a(Mode m) { return m != Mode::single_atom_b; }
bool has_atom_b(Mode m) { return m != Mode::single_atom_a; }

double binomial_error(double p, long n) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

} // namespace

OutcomeProbabilities shot_probabilities(const ExperimentConfig& config,
                                        const EffectiveCoupling& coupling,
                                        const InteractionChannel& channel,
                                        const ShotParams& shot, double duration_ns) {
    const double t = ns_to_us(duration_ns);
    switch (config.mode) {
    case Mode::two_atom: {
        const Propagator u(build_two_atom_hamiltonian(coupling, shot, channel));
        return outcome_probabilities(
            u.apply(StateVector::basis_state(two_atom_basis(), "gg"), t));
    }
    case Mode::single_atom_a:
    case Mode::single_atom_b: {
        const Atom atom = config.mode == Mode::single_atom_a ? Atom::a : Atom::b;
        const Propagator u(build_single_atom_hamiltonian(coupling, shot, atom));
        const auto final_state = u.apply(StateVector::basis_state(single_atom_basis(), "g"), t);
        const double pr = population(final_state, "r");
        OutcomeProbabilities p;
        p.gg = 1.0 - pr;
        (atom == Atom::a ? p.rg : p.gr) = pr;
        return p;
    }
    }
    return {};
}

DataSet run_experiment(const ExperimentConfig& config, std::span<const double> durations_ns,
                       int n_shots, std::uint64_t seed, Execution execution) {
    ExperimentConfig checked = config;
    checked.durations_ns.assign(durations_ns.begin(), durations_ns.end());
    checked.n_shots = n_shots;
    checked.seed = seed;
    const Prepared prep = prepare(checked);

    const bool atom_a = has_atom_a(config.mode);
    const bool atom_b = has_atom_b(config.mode);
    const auto shots = static_cast<std::uint64_t>(n_shots);

    DataSet data;
    std::vector<Detection> outcomes(shots);
    for (std::size_t d = 0; d < durations_ns.size(); ++d) {
        detail::for_each_index(n_shots, execution, [&](long i) {
            RngStream rng(seed, shot_stream(d, static_cast<std::uint64_t>(i), shots));
            const ShotParams shot = sample_shot(config.noise, config.geometry, prep.channels, rng);
            const auto p = shot_probabilities(checked, prep.coupling,
                                              prep.channels[shot.channel_index], shot,
                                              durations_ns[d]);
            Detection det = detect(p, config.detection, rng);
            det.lost_a = det.lost_a && atom_a;
            det.lost_b = det.lost_b && atom_b;
            outcomes[static_cast<std::size_t>(i)] = det;
        });

        long lost_a = 0, lost_b = 0, both = 0, one = 0;
        for (const auto& o : outcomes) {
            lost_a += o.lost_a;
            lost_b += o.lost_b;
            both += o.lost_a && o.lost_b;
            one += o.lost_a != o.lost_b;
        }
        const double n = static_cast<double>(n_shots);
        DataRow row;
        row.duration_ns = durations_ns[d];
        row.p_a = static_cast<double>(lost_a) / n;
        row.p_b = static_cast<double>(lost_b) / n;
        row.p_both = static_cast<double>(both) / n;
        row.p_exactly_one = static_cast<double>(one) / n;
        row.err_a = binomial_error(row.p_a, n_shots);
        row.err_b = binomial_error(row.p_b, n_shots);
        row.err_both = binomial_error(row.p_both, n_shots);
        row.err_exactly_one = binomial_error(row.p_exactly_one, n_shots);
        row.n_shots = n_shots;
        data.rows.push_back(row);
    }
    return data;
}

DataSet run_experiment(const ExperimentConfig& config, Execution execution) {
    return run_experiment(config, config.durations_ns, config.n_shots, config.seed, execution);
}

DataSet expected_probabilities(const ExperimentConfig& config, int n_samples,
                               Execution execution) {
    if (n_samples < 1) {
        throw ConfigError("n_samples must be >= 1");
    }
    const Prepared prep = prepare(config);
    const bool atom_a = has_atom_a(config.mode);
    const bool atom_b = has_atom_b(config.mode);
    const auto samples = static_cast<std::uint64_t>(n_samples);
    const auto& det = config.detection;

    // Per-sample loss probabilities (a, b, both, exactly one).
    std::vector<std::array<double, 4>> per_sample(samples);
    DataSet data;
    for (std::size_t d = 0; d < config.durations_ns.size(); ++d) {
        detail::for_each_index(n_samples, execution, [&](long i) {
            RngStream rng(config.seed, shot_stream(d, static_cast<std::uint64_t>(i), samples));
            const ShotParams shot = sample_shot(config.noise, config.geometry, prep.channels, rng);
            const auto p = shot_probabilities(config, prep.coupling,
                                              prep.channels[shot.channel_index], shot,
                                              config.durations_ns[d]);
            const double lr = det.p_loss_given_rydberg;
            const double lg = det.p_loss_given_ground;
            const std::array<double, 4> weight{p.gg, p.rg, p.gr, p.rr};
            const std::array<double, 4> la{lg, lr, lg, lr};
            const std::array<double, 4> lb{lg, lg, lr, lr};
            std::array<double, 4> acc{};
            for (int o = 0; o < 4; ++o) {
                const double a = atom_a ? la[o] : 0.0;
                const double b = atom_b ? lb[o] : 0.0;
                acc[0] += weight[o] * a;
                acc[1] += weight[o] * b;
                acc[2] += weight[o] * a * b;
                acc[3] += weight[o] * (a * (1.0 - b) + (1.0 - a) * b);
            }
            per_sample[static_cast<std::size_t>(i)] = acc;
        });

        std::array<double, 4> mean{}, sq{};
        for (const auto& s : per_sample) {
            for (int k = 0; k < 4; ++k) mean[k] += s[k];
        }
        for (auto& m : mean) m /= static_cast<double>(n_samples);
        for (const auto& s : per_sample) {
            for (int k = 0; k < 4; ++k) sq[k] += (s[k] - mean[k]) * (s[k] - mean[k]);
        }
        std::array<double, 4> err{};
        if (n_samples > 1) {
            for (int k = 0; k < 4; ++k) {
                err[k] = std::sqrt(sq[k] / static_cast<double>(n_samples - 1) /
                                   static_cast<double>(n_samples));
            }
        }
        auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
        DataRow row;
        row.duration_ns = config.durations_ns[d];
        row.p_a = clamp01(mean[0]);
        row.p_b = clamp01(mean[1]);
        row.p_both = clamp01(mean[2]);
        row.p_exactly_one = clamp01(mean[3]);
        row.err_a = err[0];
        row.err_b = err[1];
        row.err_both = err[2];
        row.err_exactly_one = err[3];
        row.n_shots = n_samples;
        data.rows.push_back(row);
    }
    return data;
}

namespace {

constexpr std::array<const char*, 10> csv_columns{
    "duration_ns", "p_a", "p_b", "p_both", "p_exactly_one",
    "err_a", "err_b", "err_both", "err_exactly_one", "n_shots"};

std::string format6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
    }
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
    }
}

} // namespace

void write_csv(const DataSet& data, std::ostream& out) {
    for (std::size_t i = 0; i < csv_columns.size(); ++i) {
        out << (i ? "," : "") << csv_columns[i];
    }
    out << '\n';
    for (const auto& r : data.rows) {
        out << format6(r.duration_ns) << ',' << format6(r.p_a) << ',' << format6(r.p_b) << ','
            << format6(r.p_both) << ',' << format6(r.p_exactly_one) << ',' << format6(r.err_a)
            << ',' << format6(r.err_b) << ',' << format6(r.err_both) << ','
            << format6(r.err_exactly_one) << ',' << r.n_shots << '\n';
    }
}

DataSet read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty CSV input");
    }
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
    if (!column.contains("duration_ns")) {
        throw IoError("CSV header lacks a duration_ns column");
    }

    DataSet data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw IoError("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(header.size()) + " fields");
        }
        auto get = [&](const char* name, double fallback) {
            auto it = column.find(name);
            return it == column.end() ? fallback : parse_number(fields[it->second], line_no);
        };
        DataRow r;
        r.duration_ns = get("duration_ns", 0.0);
        r.p_a = get("p_a", 0.0);
        r.p_b = get("p_b", 0.0);
        r.p_both = get("p_both", 0.0);
        r.p_exactly_one = get("p_exactly_one", 0.0);
        r.err_a = get("err_a", 0.0);
        r.err_b = get("err_b", 0.0);
        r.err_both = get("err_both", 0.0);
        r.err_exactly_one = get("err_exactly_one", 0.0);
        r.n_shots = static_cast<long>(get("n_shots", 0.0));
        data.rows.push_back(r);
    }
    return data;
}

} // namespace rydberg
