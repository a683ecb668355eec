#pragma once

#include <span>

#include <Eigen/Dense>

#include "rydberg/measurement.hpp"

namespace rydberg {

/// y(t) = a - b exp(-t / tau) cos(2 pi omega t), t in ns, omega in MHz.
struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double tau_ns = 0.0;
    double omega_mhz = 0.0;
    /// Parameter order (a, b, tau_ns, omega_mhz).
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    double residual_norm = 0.0; // sqrt of the weighted sum of squared residuals
    int dof = 0;
    int iterations = 0;
    bool weighted = false;      // false: unit weights, covariance scaled by chi2/dof
    bool tau_at_bound = false;  // no visible damping; tau pinned at its upper bound

    double sigma_a() const { return std::sqrt(covariance(0, 0)); }
    double sigma_b() const { return std::sqrt(covariance(1, 1)); }
    double sigma_tau() const { return std::sqrt(covariance(2, 2)); }
    double sigma_omega() const { return std::sqrt(covariance(3, 3)); }

    double evaluate(double t_ns) const;
    /// Value of the fitted curve at its first local maximum for t > 0.
    double first_maximum() const;
};

struct FitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-10;
    int starts = 3; // periodogram peaks tried as starting frequencies
};

/// Weighted Levenberg-Marquardt fit with weights 1/err^2. With no errors,
/// or all errors zero, unit weights are used. Zero errors mixed with
/// positive ones are floored at the smallest positive error.
///
/// Throws ValidationError for fewer than 8 points or malformed input, and
/// FitError when the data show no oscillation, the iteration does not
/// converge, or the scan covers less than 1.5 periods of the fitted
/// frequency.
FitResult fit_damped_cosine(std::span<const double> t_ns, std::span<const double> y,
                            std::span<const double> err = {}, const FitOptions& options = {});

FitResult fit_damped_cosine(const DataSet& data, Observable which,
                            const FitOptions& options = {});

struct FrequencyRatio {
    double ratio = 0.0;
    double sigma = 0.0;
};

/// omega'/omega with first-order error propagation.
FrequencyRatio frequency_ratio(const FitResult& collective, const FitResult& single);

} // namespace rydberg
