#include "rydberg/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "rydberg/analysis.hpp"
#include "rydberg/error.hpp"

namespace rydberg {

namespace {

double fitted_frequency(const DataSet& data) {
    try {
        return fit_damped_cosine(data, Observable::p_a).omega_mhz;
    } catch (const FitError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

std::vector<ScanRow> scan_distance(const ExperimentConfig& config, double r_min_um,
                                   double r_max_um, int steps, Execution execution) {
    if (!(r_min_um > 0.0) || !(r_max_um >= r_min_um) || steps < 1) {
        throw ConfigError("distance scan needs 0 < r_min <= r_max and steps >= 1");
    }

    ExperimentConfig single = config;
    single.mode = Mode::single_atom_a;
    const double omega_single = fitted_frequency(run_experiment(single, execution));

    std::vector<ScanRow> rows;
    for (int i = 0; i < steps; ++i) {
        const double r = steps == 1
            ? r_min_um
            : r_min_um + (r_max_um - r_min_um) * i / static_cast<double>(steps - 1);
        ExperimentConfig pair = config;
        pair.mode = Mode::two_atom;
        pair.geometry.separation_um = r;
        const DataSet data = run_experiment(pair, execution);

        ScanRow row;
        row.separation_um = r;
        row.shift_mhz = interaction_shift(pair.geometry);
        for (const auto& d : data.rows) row.max_p_both = std::max(row.max_p_both, d.p_both);
        row.omega_single_mhz = omega_single;
        row.omega_collective_mhz = fitted_frequency(data);
        row.ratio = row.omega_collective_mhz / omega_single;
        rows.push_back(row);
    }
    return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
    out << "separation_um,shift_mhz,max_p_both,omega_single_mhz,omega_collective_mhz,ratio\n";
    auto f = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        out << f(r.separation_um) << ',' << f(r.shift_mhz) << ',' << f(r.max_p_both) << ','
            << f(r.omega_single_mhz) << ',' << f(r.omega_collective_mhz) << ',' << f(r.ratio)
            << '\n';
    }
}

} // namespace rydberg
