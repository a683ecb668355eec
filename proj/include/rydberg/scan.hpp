#pragma once

#include <iosfwd>
#include <vector>

#include "rydberg/experiment.hpp"
#include "rydberg/measurement.hpp"

namespace rydberg {

/// One separation of a distance scan. The collective frequency is the
/// fitted oscillation frequency of P_a with both traps filled, the single
/// frequency that of P_a with trap b empty. Frequencies are NaN where the
/// fit fails (e.g. strongly non-sinusoidal curves near the crossover).
struct ScanRow {
    double separation_um = 0.0;
    double shift_mhz = 0.0;
    double max_p_both = 0.0;
    double omega_single_mhz = 0.0;
    double omega_collective_mhz = 0.0;
    double ratio = 0.0;
};

/// `steps` separations evenly spaced over [r_min, r_max]; steps == 1 runs
/// r_min only. Every point reuses the seed of `config`, so a single point
/// reproduces run_experiment on the same configuration.
std::vector<ScanRow> scan_distance(const ExperimentConfig& config, double r_min_um,
                                   double r_max_um, int steps,
                                   Execution execution = Execution::parallel);

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out);

} // namespace rydberg
