// rydsim: command-line front end for the two-atom Rydberg blockade simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rydberg/analysis.hpp"
#include "rydberg/config.hpp"
#include "rydberg/error.hpp"
#include "rydberg/measurement.hpp"
#include "rydberg/protocol.hpp"
#include "rydberg/scan.hpp"

namespace fs = std::filesystem;
using namespace rydberg;

namespace {

enum ExitCode {
    ok = 0,
    usage = 2,
    input_error = 3,
    config_error = 4,
    simulation_error = 5,
    fit_error = 6,
    output_error = 7,
};

constexpr const char* exit_code_help =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (bad or missing flags)\n"
    "  3  input file missing, unreadable or malformed CSV\n"
    "  4  configuration schema or validation error\n"
    "  5  simulation failure\n"
    "  6  fit failure\n"
    "  7  output file could not be written\n";

struct OutputError : Error {
    using Error::Error;
};

struct Source {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> shots;
};

void add_source_options(CLI::App* cmd, Source& src) {
    auto* c = cmd->add_option("--config", src.config, "JSON configuration file");
    auto* p = cmd->add_option("--preset", src.preset,
                              "Named preset (fig3a, fig3b, fig4, protocol) or preset file");
    c->excludes(p);
    cmd->add_option("--seed", src.seed, "Override the configured seed");
    cmd->add_option("--shots", src.shots, "Override the configured shot count")
        ->check(CLI::PositiveNumber);
}

fs::path preset_path(const std::string& name) {
    if (fs::exists(name)) return name;
    const char* env = std::getenv("RYDSIM_PRESET_DIR");
    const fs::path dir = env ? fs::path(env) : fs::path(RYDSIM_PRESET_DIR);
    return dir / (name + ".json");
}

fs::path config_path(const Source& src) {
    if (!src.config.empty()) return src.config;
    if (!src.preset.empty()) return preset_path(src.preset);
    throw CLI::RequiredError("--config or --preset");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw OutputError("cannot write '" + path + "'");
    }
}

// out.csv + "two-atom" -> out.two-atom.csv
std::string mode_output(const std::string& output, Mode mode) {
    fs::path p(output);
    const auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + "." + std::string(to_string(mode)) + (ext.empty() ? ".csv" : ext);
}

int cmd_run(const Source& src, const std::string& output) {
    ExperimentFile file = load_experiment(config_path(src));
    if (src.seed) file.config.seed = *src.seed;
    if (src.shots) file.config.n_shots = *src.shots;
    if (file.modes.size() > 1 && (output.empty() || output == "-")) {
        throw CLI::ValidationError("--output", "several modes need an output file name");
    }
    for (Mode mode : file.modes) {
        ExperimentConfig cfg = file.config;
        cfg.mode = mode;
        std::ostringstream csv;
        write_csv(run_experiment(cfg), csv);
        const std::string path = file.modes.size() > 1 ? mode_output(output, mode) : output;
        write_text(path, csv.str());
        if (!path.empty() && path != "-") {
            std::cerr << "wrote " << path << " (" << to_string(mode) << ")\n";
        }
    }
    return ok;
}

int cmd_scan(const Source& src, double r_min, double r_max, int steps,
             const std::string& output) {
    ExperimentFile file = load_experiment(config_path(src));
    if (src.seed) file.config.seed = *src.seed;
    if (src.shots) file.config.n_shots = *src.shots;
    std::ostringstream csv;
    write_scan_csv(scan_distance(file.config, r_min, r_max, steps), csv);
    write_text(output, csv.str());
    return ok;
}

int cmd_fit(const std::string& input, const std::string& column, const std::string& output) {
    std::ifstream in(input);
    if (!in) {
        throw IoError("cannot open '" + input + "'");
    }
    const DataSet data = read_csv(in);
    const FitResult fit = fit_damped_cosine(data, parse_observable(column));
    if (!output.empty()) {
        write_text(output, fit_report(fit).dump(2) + "\n");
    }
    std::cout << "omega/2pi = " << fit.omega_mhz << " +- " << fit.sigma_omega() << " MHz\n";
    return ok;
}

int cmd_protocol(const Source& src, const std::string& output) {
    ProtocolFile file = load_protocol(config_path(src));
    if (src.seed) file.seed = *src.seed;
    if (src.shots) file.n_shots = *src.shots;
    const ProtocolResult result = run_protocol(file.config, file.n_shots, file.seed);
    write_text(output, protocol_report(result, file).dump(2) + "\n");
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-atom Rydberg blockade simulator"};
    app.footer(exit_code_help);
    app.require_subcommand(1);

    Source src;
    std::string output;

    auto* run = app.add_subcommand("run", "Simulate a pulse-duration scan and write a CSV");
    add_source_options(run, src);
    run->add_option("--output", output, "CSV output path ('-' for stdout)");

    double r_min = 2.0, r_max = 20.0;
    int steps = 10;
    auto* scan = app.add_subcommand("scan-distance",
                                    "Scan the separation: double excitation and frequency ratio");
    add_source_options(scan, src);
    scan->add_option("--r-min", r_min, "Smallest separation (um)")->check(CLI::PositiveNumber);
    scan->add_option("--r-max", r_max, "Largest separation (um)")->check(CLI::PositiveNumber);
    scan->add_option("--steps", steps, "Number of separations")->check(CLI::PositiveNumber);
    scan->add_option("--output", output, "CSV output path ('-' for stdout)");

    std::string input, column = "p_a";
    auto* fit = app.add_subcommand("fit", "Fit a - b exp(-t/tau) cos(2 pi omega t) to a CSV column");
    fit->add_option("--input", input, "DataSet CSV")->required();
    fit->add_option("--column", column, "p_a, p_b, p_both or p_exactly_one");
    fit->add_option("--output", output, "JSON report path");

    auto* protocol = app.add_subcommand("protocol", "Run the two-pulse phase-erasure protocol");
    add_source_options(protocol, src);
    protocol->add_option("--output", output, "JSON report path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (run->parsed()) return cmd_run(src, output);
        if (scan->parsed()) return cmd_scan(src, r_min, r_max, steps, output);
        if (fit->parsed()) return cmd_fit(input, column, output);
        if (protocol->parsed()) return cmd_protocol(src, output);
    } catch (const CLI::Error& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return usage;
    } catch (const OutputError& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return output_error;
    } catch (const IoError& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return input_error;
    } catch (const LookupError& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return config_error;
    } catch (const ConfigError& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return config_error;
    } catch (const ValidationError& e) {
        std::cerr << "rydsim: " << e.what() << '\n';
        return config_error;
    } catch (const FitError& e) {
        std::cerr << "rydsim: fit failed: " << e.what() << '\n';
        return fit_error;
    } catch (const std::exception& e) {
        std::cerr << "rydsim: simulation failed: " << e.what() << '\n';
        return simulation_error;
    }
    return usage;
}
