#include "rydberg/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "rydberg/error.hpp"

namespace rydberg {

namespace {

// Rejects unknown keys, so typos in unit-suffixed names do not silently
// fall back to defaults.
void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + " must be a JSON object");
    }
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!key.empty() && key.front() == '_') continue;
        if (!known.contains(key)) {
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

void read_vec3(const json& obj, const char* key, Vec3& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        throw ConfigError(std::string("field '") + key + "' must be an array of 3 numbers");
    }
    out = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

LaserConfig parse_lasers(const json& j) {
    check_keys(j, "lasers", {"omega_r_mhz", "omega_b_mhz", "delta_intermediate_mhz",
                             "two_photon_detuning_mhz", "lambda_r_um", "lambda_b_um", "dir_r",
                             "dir_b"});
    LaserConfig l;
    read(j, "omega_r_mhz", l.omega_r_mhz);
    read(j, "omega_b_mhz", l.omega_b_mhz);
    read(j, "delta_intermediate_mhz", l.delta_intermediate_mhz);
    read(j, "two_photon_detuning_mhz", l.two_photon_detuning_mhz);
    read(j, "lambda_r_um", l.lambda_r_um);
    read(j, "lambda_b_um", l.lambda_b_um);
    read_vec3(j, "dir_r", l.dir_r);
    read_vec3(j, "dir_b", l.dir_b);
    return l;
}

GeometryConfig parse_geometry(const json& j) {
    check_keys(j, "geometry", {"separation_um", "axis", "c3_mhz_um3"});
    GeometryConfig g;
    read(j, "separation_um", g.separation_um);
    read_vec3(j, "axis", g.axis);
    read(j, "c3_mhz_um3", g.c3_mhz_um3);
    return g;
}

std::vector<ChannelSpec> parse_channels(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("channels must be a non-empty array");
    }
    std::vector<ChannelSpec> out;
    for (const auto& c : j) {
        check_keys(c, "channel", {"shift_mhz", "shift_relative", "weight"});
        const bool absolute = c.contains("shift_mhz");
        const bool relative = c.contains("shift_relative");
        if (absolute == relative) {
            throw ConfigError("each channel needs exactly one of shift_mhz or shift_relative");
        }
        ChannelSpec s;
        s.relative = relative;
        read(c, relative ? "shift_relative" : "shift_mhz", s.shift);
        read(c, "weight", s.weight);
        out.push_back(s);
    }
    return out;
}

AmplitudeConvention parse_convention(const std::string& name) {
    if (name == "turning_point") return AmplitudeConvention::turning_point;
    if (name == "rms") return AmplitudeConvention::rms;
    throw ConfigError("amplitude_convention must be 'turning_point' or 'rms'");
}

NoiseModel parse_noise(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "none") return NoiseModel::none();
        if (name == "experiment") return NoiseModel::experiment();
        throw ConfigError("noise preset must be 'none' or 'experiment'");
    }
    check_keys(j, "noise", {"freq_jitter_rms_mhz", "intensity_rms", "pumping_efficiency",
                            "temperature_uk", "sigma_longitudinal_um", "sigma_radial_um",
                            "motion_amplitude_longitudinal_um", "motion_amplitude_radial_um",
                            "amplitude_convention", "longitudinal_axis"});
    NoiseModel n;
    read(j, "freq_jitter_rms_mhz", n.freq_jitter_rms_mhz);
    read(j, "intensity_rms", n.intensity_rms);
    read(j, "pumping_efficiency", n.pumping_efficiency);
    read(j, "temperature_uk", n.temperature_uk);
    read_vec3(j, "longitudinal_axis", n.longitudinal_axis);

    std::string convention = "turning_point";
    read(j, "amplitude_convention", convention);
    const auto conv = parse_convention(convention);
    auto sigma = [&](const char* sigma_key, const char* amplitude_key, double& out) {
        if (j.contains(sigma_key) && j.contains(amplitude_key)) {
            throw ConfigError(std::string("give either ") + sigma_key + " or " + amplitude_key);
        }
        read(j, sigma_key, out);
        if (j.contains(amplitude_key)) {
            double amplitude = 0.0;
            read(j, amplitude_key, amplitude);
            out = position_sigma(amplitude, conv);
        }
    };
    sigma("sigma_longitudinal_um", "motion_amplitude_longitudinal_um", n.sigma_longitudinal_um);
    sigma("sigma_radial_um", "motion_amplitude_radial_um", n.sigma_radial_um);
    return n;
}

DetectionParams parse_detection(const json& j) {
    check_keys(j, "detection", {"p_loss_given_rydberg", "p_loss_given_ground"});
    DetectionParams d;
    read(j, "p_loss_given_rydberg", d.p_loss_given_rydberg);
    read(j, "p_loss_given_ground", d.p_loss_given_ground);
    return d;
}

std::vector<double> parse_durations(const json& doc) {
    const bool list = doc.contains("durations_ns");
    const bool scan = doc.contains("duration_scan_ns");
    if (list == scan) {
        throw ConfigError("give exactly one of durations_ns or duration_scan_ns");
    }
    if (list) {
        std::vector<double> d;
        read(doc, "durations_ns", d);
        return d;
    }
    const auto& s = doc.at("duration_scan_ns");
    check_keys(s, "duration_scan_ns", {"start", "stop", "step"});
    double start = 0.0, stop = 0.0, step = 0.0;
    read(s, "start", start);
    read(s, "stop", stop);
    read(s, "step", step);
    return duration_grid(start, stop, step);
}

std::vector<Mode> parse_modes(const json& doc) {
    if (!doc.contains("mode")) return {Mode::two_atom};
    const auto& m = doc.at("mode");
    std::vector<Mode> out;
    if (m.is_string()) {
        out.push_back(parse_mode(m.get<std::string>()));
    } else if (m.is_array() && !m.empty()) {
        for (const auto& e : m) {
            if (!e.is_string()) throw ConfigError("mode entries must be strings");
            out.push_back(parse_mode(e.get<std::string>()));
        }
    } else {
        throw ConfigError("mode must be a string or a non-empty array of strings");
    }
    return out;
}

PulseConfig parse_pulse(const json& j, const char* where, PulseConfig pulse) {
    check_keys(j, where, {"omega_mhz", "k_eff_rad_per_um", "duration_ns"});
    read(j, "omega_mhz", pulse.omega_mhz);
    read_vec3(j, "k_eff_rad_per_um", pulse.k_eff);
    read(j, "duration_ns", pulse.duration_ns);
    return pulse;
}

json parameter(double value, double sigma) { return {{"value", value}, {"sigma", sigma}}; }

} // namespace

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

ExperimentFile parse_experiment(const json& doc) {
    check_keys(doc, "experiment", {"lasers", "geometry", "channels", "noise", "detection",
                                   "durations_ns", "duration_scan_ns", "n_shots", "seed",
                                   "mode"});
    ExperimentFile f;
    auto& c = f.config;
    if (doc.contains("lasers")) c.lasers = parse_lasers(doc.at("lasers"));
    if (doc.contains("geometry")) c.geometry = parse_geometry(doc.at("geometry"));
    if (doc.contains("channels")) c.channels = parse_channels(doc.at("channels"));
    if (doc.contains("noise")) c.noise = parse_noise(doc.at("noise"));
    if (doc.contains("detection")) c.detection = parse_detection(doc.at("detection"));
    c.durations_ns = parse_durations(doc);
    read(doc, "n_shots", c.n_shots);
    read(doc, "seed", c.seed);
    f.modes = parse_modes(doc);
    c.mode = f.modes.front();
    c.validate();
    return f;
}

ExperimentFile load_experiment(const std::filesystem::path& path) {
    return parse_experiment(read_json(path));
}

ProtocolFile parse_protocol(const json& doc) {
    check_keys(doc, "protocol", {"lasers", "geometry", "channels", "noise", "excitation",
                                 "transfer", "resample_positions", "n_shots", "seed"});
    const LaserConfig lasers =
        doc.contains("lasers") ? parse_lasers(doc.at("lasers")) : LaserConfig{};
    const GeometryConfig geometry =
        doc.contains("geometry") ? parse_geometry(doc.at("geometry")) : GeometryConfig{};

    ProtocolFile f;
    auto& c = f.config;
    c = ProtocolConfig::matched(lasers, geometry);
    if (doc.contains("excitation")) c.excitation = parse_pulse(doc.at("excitation"), "excitation", c.excitation);
    if (doc.contains("transfer")) c.transfer = parse_pulse(doc.at("transfer"), "transfer", c.transfer);
    if (doc.contains("channels")) c.channels = parse_channels(doc.at("channels"));
    if (doc.contains("noise")) c.noise = parse_noise(doc.at("noise"));
    read(doc, "resample_positions", c.resample_positions);
    read(doc, "n_shots", f.n_shots);
    read(doc, "seed", f.seed);
    if (f.n_shots < 1) {
        throw ConfigError("n_shots must be >= 1");
    }
    c.validate();
    return f;
}

ProtocolFile load_protocol(const std::filesystem::path& path) {
    return parse_protocol(read_json(path));
}

json fit_report(const FitResult& fit) {
    json cov = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) row.push_back(fit.covariance(i, j));
        cov.push_back(row);
    }
    return {
        {"model", "a - b * exp(-t / tau) * cos(2 pi omega t)"},
        {"units", {{"t", "ns"}, {"tau", "ns"}, {"omega", "MHz"}}},
        {"parameters",
         {{"a", parameter(fit.a, fit.sigma_a())},
          {"b", parameter(fit.b, fit.sigma_b())},
          {"tau_ns", parameter(fit.tau_ns, fit.sigma_tau())},
          {"omega_mhz", parameter(fit.omega_mhz, fit.sigma_omega())}}},
        {"covariance", cov},
        {"covariance_order", {"a", "b", "tau_ns", "omega_mhz"}},
        {"residual_norm", fit.residual_norm},
        {"dof", fit.dof},
        {"iterations", fit.iterations},
        {"weighted", fit.weighted},
        {"tau_at_bound", fit.tau_at_bound},
    };
}

json protocol_report(const ProtocolResult& result, const ProtocolFile& file) {
    return {
        {"mean_fidelity", result.mean_fidelity},
        {"fidelity_stddev", result.fidelity_stddev},
        {"mean_manifold_population", result.mean_manifold_population},
        {"n_shots", file.n_shots},
        {"seed", file.seed},
        {"excitation_duration_ns", file.config.excitation.duration_ns},
        {"transfer_duration_ns", file.config.transfer.duration_ns},
        {"resample_positions", file.config.resample_positions},
    };
}

} // namespace rydberg
