#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "rydberg/experiment.hpp"
#include "rydberg/quantum.hpp"
#include "rydberg/rng.hpp"

namespace rydberg {

/// Shot loops run either on the OpenMP path or on the serial reference
/// path. Both produce bit-identical results.
enum class Execution { serial, parallel };

struct OutcomeProbabilities {
    double gg = 1.0;
    double rg = 0.0;
    double gr = 0.0;
    double rr = 0.0;
};

/// Born rule on the two-atom computational basis. Throws BasisMismatchError
/// for any other basis.
OutcomeProbabilities outcome_probabilities(const StateVector& final_state);

struct Detection {
    bool lost_a = false;
    bool lost_b = false;
};

/// Samples one joint basis outcome, then applies the per-atom conditional
/// loss probabilities. Always consumes three uniforms.
Detection detect(const OutcomeProbabilities& probabilities, const DetectionParams& detection,
                 RngStream& rng);

enum class Observable { p_a, p_b, p_both, p_exactly_one };

std::string_view to_string(Observable which);
/// Accepts "p_a", "p_b", "p_both", "p_exactly_one". Throws LookupError.
Observable parse_observable(std::string_view name);

struct DataRow {
    double duration_ns = 0.0;
    double p_a = 0.0;
    double p_b = 0.0;
    double p_both = 0.0;
    double p_exactly_one = 0.0;
    double err_a = 0.0;
    double err_b = 0.0;
    double err_both = 0.0;
    double err_exactly_one = 0.0;
    long n_shots = 0;

    double value(Observable which) const;
    double error(Observable which) const;

    friend bool operator==(const DataRow&, const DataRow&) = default;
};

struct DataSet {
    std::vector<DataRow> rows;

    std::vector<double> durations() const;
    std::vector<double> values(Observable which) const;
    std::vector<double> errors(Observable which) const;

    /// Probabilities in [0, 1], errors >= 0, strictly increasing durations.
    void validate() const;

    friend bool operator==(const DataSet&, const DataSet&) = default;
};

/// Born probabilities of one shot after a square pulse of `duration_ns`.
/// In single-atom modes the absent atom is reported in "g".
OutcomeProbabilities shot_probabilities(const ExperimentConfig& config,
                                        const EffectiveCoupling& coupling,
                                        const InteractionChannel& channel,
                                        const ShotParams& shot, double duration_ns);

/// Monte Carlo experiment: per duration, n_shots fresh shots, each sampled,
/// propagated and detected. Errors are sqrt(p(1-p)/n_shots).
DataSet run_experiment(const ExperimentConfig& config, std::span<const double> durations_ns,
                       int n_shots, std::uint64_t seed,
                       Execution execution = Execution::parallel);

/// Uses the durations, shot count and seed stored in `config`.
DataSet run_experiment(const ExperimentConfig& config,
                       Execution execution = Execution::parallel);

/// Infinite-detection-statistics limit: Born probabilities (after the
/// detection map) averaged over `n_samples` noise realizations. Errors are
/// standard errors of that average, zero when n_samples == 1.
DataSet expected_probabilities(const ExperimentConfig& config, int n_samples,
                               Execution execution = Execution::parallel);

/// Header row, then one row per duration, six significant digits.
void write_csv(const DataSet& data, std::ostream& out);
/// Columns are matched by header name. Missing error columns read as zero.
/// Throws IoError on malformed input.
DataSet read_csv(std::istream& in);

} // namespace rydberg
