#include "rydberg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "rydberg/error.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

namespace {

using Params = Eigen::Vector4d; // a, b, log(tau_ns), omega_mhz
using Normal = Eigen::Matrix4d;

constexpr int min_points = 8;
constexpr double min_periods = 1.5;
constexpr double tau_bound_factor = 1e6; // tau_max = factor * scan span

struct Problem {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> w; // 1 / sigma^2
    double log_tau_max = 0.0;
    double nyquist_mhz = 0.0;
};

double model(const Params& p, double t_ns) {
    const double phase = two_pi * p(3) * ns_to_us(t_ns);
    return p(0) - p(1) * std::exp(-t_ns / std::exp(p(2))) * std::cos(phase);
}

double chi_square(const Problem& pr, const Params& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < pr.t.size(); ++i) {
        const double r = pr.y[i] - model(p, pr.t[i]);
        s += pr.w[i] * r * r;
    }
    return s;
}

// Normal matrix J^T W J and gradient J^T W r at p.
void linearize(const Problem& pr, const Params& p, Normal& normal, Params& gradient) {
    normal.setZero();
    gradient.setZero();
    const double tau = std::exp(p(2));
    for (std::size_t i = 0; i < pr.t.size(); ++i) {
        const double t = pr.t[i];
        const double t_us = ns_to_us(t);
        const double decay = std::exp(-t / tau);
        const double c = std::cos(two_pi * p(3) * t_us);
        const double s = std::sin(two_pi * p(3) * t_us);
        Params j;
        j(0) = 1.0;
        j(1) = -decay * c;
        j(2) = -p(1) * decay * c * (t / tau);
        j(3) = p(1) * decay * s * two_pi * t_us;
        const double r = pr.y[i] - (p(0) - p(1) * decay * c);
        normal.noalias() += pr.w[i] * j * j.transpose();
        gradient.noalias() += pr.w[i] * r * j;
    }
}

// Candidate starting frequencies: the strongest local maxima of the
// periodogram of the mean-subtracted data, on a grid up to Nyquist.
std::vector<double> periodogram_peaks(const Problem& pr, double mean, int count) {
    const double span_us = ns_to_us(pr.t.back() - pr.t.front());
    const double df = 1.0 / (10.0 * span_us);
    std::vector<double> freq;
    std::vector<double> power;
    for (double f = df; f < pr.nyquist_mhz; f += df) {
        Complex acc{};
        for (std::size_t i = 0; i < pr.t.size(); ++i) {
            acc += (pr.y[i] - mean) * std::polar(1.0, -two_pi * f * ns_to_us(pr.t[i]));
        }
        freq.push_back(f);
        power.push_back(std::norm(acc));
    }
    std::vector<std::size_t> peaks;
    for (std::size_t k = 0; k < power.size(); ++k) {
        const bool left = k == 0 || power[k] >= power[k - 1];
        const bool right = k + 1 == power.size() || power[k] >= power[k + 1];
        if (left && right) peaks.push_back(k);
    }
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t l, std::size_t r) { return power[l] > power[r]; });
    std::vector<double> out;
    for (std::size_t k = 0; k < peaks.size() && static_cast<int>(out.size()) < count; ++k) {
        out.push_back(freq[peaks[k]]);
    }
    return out;
}

struct Outcome {
    Params p;
    double chi2 = 0.0;
    int iterations = 0;
    bool converged = false;
    double lambda = 0.0;
};

Outcome levenberg_marquardt(const Problem& pr, Params p, const FitOptions& options) {
    double lambda = 1e-3;
    double chi2 = chi_square(pr, p);
    Normal normal;
    Params gradient;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        linearize(pr, p, normal, gradient);
        bool accepted = false;
        while (!accepted) {
            Normal damped = normal;
            for (int k = 0; k < 4; ++k) {
                damped(k, k) += lambda * std::max(normal(k, k), 1e-300);
            }
            Params step = damped.ldlt().solve(gradient);
            Params trial = p + step;
            trial(2) = std::min(trial(2), pr.log_tau_max);
            const bool in_bounds = trial(3) > 0.0 && trial(3) < pr.nyquist_mhz &&
                                   trial.allFinite();
            const double trial_chi2 = in_bounds ? chi_square(pr, trial)
                                                : std::numeric_limits<double>::infinity();
            if (trial_chi2 <= chi2) {
                const Params taken = trial - p;
                const double rel = (taken.array().abs() / (p.array().abs() + 1e-12)).maxCoeff();
                p = trial;
                chi2 = trial_chi2;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (rel < options.step_tolerance) {
                    return {p, chi2, it + 1, true, lambda};
                }
            } else {
                lambda *= 10.0;
                // No direction decreases chi2 any further: stationary point.
                if (lambda > 1e16) {
                    return {p, chi2, it + 1, true, lambda};
                }
            }
        }
    }
    return {p, chi2, it, false, lambda};
}

double median_spacing(const std::vector<double>& t) {
    std::vector<double> d;
    for (std::size_t i = 1; i < t.size(); ++i) d.push_back(t[i] - t[i - 1]);
    std::nth_element(d.begin(), d.begin() + static_cast<long>(d.size() / 2), d.end());
    return d[d.size() / 2];
}

} // namespace

double FitResult::evaluate(double t_ns) const {
    return a - b * std::exp(-t_ns / tau_ns) * std::cos(two_pi * omega_mhz * ns_to_us(t_ns));
}

double FitResult::first_maximum() const {
    // The first maximum lies within one period of t = 0.
    const double period_ns = us_to_ns(1.0 / omega_mhz);
    constexpr int samples = 20000;
    double best = -std::numeric_limits<double>::infinity();
    double previous = evaluate(0.0);
    bool rising = false;
    for (int i = 1; i <= 2 * samples; ++i) {
        const double v = evaluate(period_ns * i / samples);
        if (v > previous) {
            rising = true;
        } else if (rising) {
            return previous;
        }
        best = std::max(best, v);
        previous = v;
    }
    return best;
}

FitResult fit_damped_cosine(std::span<const double> t_ns, std::span<const double> y,
                            std::span<const double> err, const FitOptions& options) {
    const std::size_t n = t_ns.size();
    if (y.size() != n || (!err.empty() && err.size() != n)) {
        throw ValidationError("fit input columns differ in length");
    }
    if (n < static_cast<std::size_t>(min_points)) {
        throw ValidationError("damped-cosine fit needs at least 8 points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(t_ns[i]) || !std::isfinite(y[i]) ||
            (!err.empty() && !(err[i] >= 0.0))) {
            throw ValidationError("fit input contains non-finite values or negative errors");
        }
        if (i > 0 && !(t_ns[i] > t_ns[i - 1])) {
            throw ValidationError("fit abscissae must be strictly increasing");
        }
    }

    Problem pr;
    pr.t.assign(t_ns.begin(), t_ns.end());
    pr.y.assign(y.begin(), y.end());
    double floor = std::numeric_limits<double>::infinity();
    for (double e : err) {
        if (e > 0.0) floor = std::min(floor, e);
    }
    const bool weighted = std::isfinite(floor);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = weighted ? std::max(err[i], floor) : 1.0;
        pr.w.push_back(1.0 / (e * e));
    }

    const double mean = std::accumulate(pr.y.begin(), pr.y.end(), 0.0) / static_cast<double>(n);
    const auto [lo, hi] = std::minmax_element(pr.y.begin(), pr.y.end());
    const double spread = *hi - *lo;
    if (!(spread > 1e-12 * std::max(1.0, std::abs(mean)))) {
        throw FitError("data show no oscillation; frequency is unconstrained");
    }

    const double span_ns = pr.t.back() - pr.t.front();
    pr.nyquist_mhz = 1.0 / (2.0 * ns_to_us(median_spacing(pr.t)));
    pr.log_tau_max = std::log(tau_bound_factor * span_ns);

    std::vector<double> starts = periodogram_peaks(pr, mean, options.starts);
    if (starts.empty()) {
        throw FitError("no periodogram peak below the Nyquist frequency");
    }

    Outcome best;
    best.chi2 = std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    for (double f0 : starts) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            proj += (pr.y[i] - mean) * std::cos(two_pi * f0 * ns_to_us(pr.t[i]));
        }
        Params p0;
        p0 << mean, (proj > 0.0 ? -0.5 : 0.5) * spread, std::log(span_ns), f0;
        Outcome o = levenberg_marquardt(pr, p0, options);
        total_iterations += o.iterations;
        if (o.converged && o.chi2 < best.chi2) best = o;
    }
    if (!best.converged) {
        std::ostringstream msg;
        msg << "fit did not converge within " << options.max_iterations
            << " iterations from " << starts.size() << " starting frequencies";
        throw FitError(msg.str());
    }

    const Params& p = best.p;
    if (!(std::abs(p(1)) > 1e-9 * (std::abs(p(0)) + 1.0))) {
        throw FitError("fitted oscillation amplitude vanished; frequency is unconstrained");
    }
    if (p(3) * ns_to_us(span_ns) < min_periods) {
        std::ostringstream msg;
        msg << "scan covers " << p(3) * ns_to_us(span_ns)
            << " periods of the fitted frequency; at least 1.5 are required";
        throw FitError(msg.str());
    }

    FitResult fit;
    fit.a = p(0);
    fit.b = p(1);
    fit.tau_ns = std::exp(p(2));
    fit.omega_mhz = p(3);
    fit.residual_norm = std::sqrt(best.chi2);
    fit.dof = static_cast<int>(n) - 4;
    fit.iterations = total_iterations;
    fit.weighted = weighted;
    fit.tau_at_bound = p(2) >= pr.log_tau_max - 1e-9;

    Normal normal;
    Params gradient;
    linearize(pr, p, normal, gradient);
    std::vector<int> free = fit.tau_at_bound ? std::vector<int>{0, 1, 3}
                                             : std::vector<int>{0, 1, 2, 3};
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = normal(free[i], free[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
    const double largest = eig.eigenvalues().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > 1e-14 * largest)) {
        throw FitError("normal matrix is singular at the optimum; parameters unconstrained");
    }
    Eigen::MatrixXd sub_cov = eig.eigenvectors() *
                              eig.eigenvalues().cwiseInverse().asDiagonal() *
                              eig.eigenvectors().transpose();
    if (!weighted) {
        sub_cov *= fit.dof > 0 ? best.chi2 / fit.dof : 0.0;
    }
    Normal cov = Normal::Zero();
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) cov(free[i], free[j]) = sub_cov(i, j);
    // d tau = tau d(log tau)
    const Eigen::Vector4d scale(1.0, 1.0, fit.tau_ns, 1.0);
    fit.covariance = scale.asDiagonal() * cov * scale.asDiagonal();
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
    return fit;
}

FitResult fit_damped_cosine(const DataSet& data, Observable which, const FitOptions& options) {
    const auto t = data.durations();
    const auto y = data.values(which);
    const auto e = data.errors(which);
    return fit_damped_cosine(t, y, e, options);
}

FrequencyRatio frequency_ratio(const FitResult& collective, const FitResult& single) {
    if (!(collective.omega_mhz > 0.0) || !(single.omega_mhz > 0.0)) {
        throw ValidationError("frequency ratio needs positive fitted frequencies");
    }
    const double w1 = collective.omega_mhz;
    const double w0 = single.omega_mhz;
    const double s1 = collective.sigma_omega();
    const double s0 = single.sigma_omega();
    FrequencyRatio r;
    r.ratio = w1 / w0;
    r.sigma = std::hypot(s1 / w0, w1 * s0 / (w0 * w0));
    return r;
}

} // namespace rydberg
