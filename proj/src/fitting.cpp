#include "triphoton/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "triphoton/errors.hpp"
#include "triphoton/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triphoton {

namespace {

constexpr double kStepTolerance = 1e-12;      // stop once steps are this small
constexpr double kConvergedTolerance = 1e-8;  // flag threshold at the iteration cap

using Vector4 = Eigen::Vector4d;

struct Model {
    // value and 4-gradient of C(delta) at parameters p = (A, V, delta0, w)
    static double value(const Vector4& p, double delta) {
        const double z = (delta - p[2]) / p[3];
        return p[0] * (1.0 - p[1] * std::exp(-0.5 * z * z));
    }
    static Vector4 gradient(const Vector4& p, double delta) {
        const double u = delta - p[2];
        const double z = u / p[3];
        const double g = std::exp(-0.5 * z * z);
        Vector4 grad;
        grad[0] = 1.0 - p[1] * g;
        grad[1] = -p[0] * g;
        grad[2] = -p[0] * p[1] * g * u / (p[3] * p[3]);
        grad[3] = -p[0] * p[1] * g * u * u / (p[3] * p[3] * p[3]);
        return grad;
    }
};

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

double weighted_cost(const Eigen::VectorXd& residuals) { return residuals.squaredNorm(); }

Vector4 initial_guess(const DelayScan& scan, FitMode mode) {
    const auto& samples = scan.samples;
    // baseline from the two samples farthest from zero delay
    std::vector<int> order(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) order[k] = static_cast<int>(k);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(samples[static_cast<std::size_t>(a)].first) >
               std::abs(samples[static_cast<std::size_t>(b)].first);
    });
    const double baseline = 0.5 * (samples[static_cast<std::size_t>(order[0])].second +
                                   samples[static_cast<std::size_t>(order[1])].second);
    if (!(baseline > 0.0)) {
        throw NumericalError("degenerate fit: baseline estimate from the scan edges is "
                             "not positive");
    }

    double delay_min = samples.front().first, delay_max = samples.front().first;
    double y_min = samples.front().second, y_max = samples.front().second;
    double argmin = samples.front().first, argmax = samples.front().first;
    for (const auto& [delay, y] : samples) {
        delay_min = std::min(delay_min, delay);
        delay_max = std::max(delay_max, delay);
        if (y < y_min) { y_min = y; argmin = delay; }
        if (y > y_max) { y_max = y; argmax = delay; }
    }
    const double span = delay_max - delay_min;
    if (!(span > 0.0)) {
        throw ValidationError("delay scan has zero span");
    }

    FitMode resolved = mode;
    if (resolved == FitMode::kAuto) {
        resolved = (baseline - y_min >= y_max - baseline) ? FitMode::kDip : FitMode::kPeak;
    }
    const double extremum = resolved == FitMode::kDip ? y_min : y_max;
    const double center = resolved == FitMode::kDip ? argmin : argmax;

    Vector4 p;
    p[0] = baseline;
    p[1] = 1.0 - extremum / baseline;
    p[2] = center;
    p[3] = span / 4.0;
    if (std::abs(p[1]) < 1e-12) p[1] = resolved == FitMode::kDip ? 1e-6 : -1e-6;

    // the scan must reach the baseline region (>= two initial widths out);
    // equality holds exactly for symmetric grids, so allow a relative slack
    double max_abs_delay = 0.0;
    for (const auto& [delay, y] : samples) {
        (void)y;
        max_abs_delay = std::max(max_abs_delay, std::abs(delay));
    }
    if (max_abs_delay < 2.0 * p[3] * (1.0 - 1e-9)) {
        throw ValidationError("delay scan never reaches the baseline region: need a "
                              "sample at least two initial widths (span/2) from zero "
                              "delay");
    }
    return p;
}

Eigen::VectorXd weights_for(const DelayScan& scan, bool poisson_weighting) {
    Eigen::VectorXd weights(static_cast<Eigen::Index>(scan.samples.size()));
    for (std::size_t k = 0; k < scan.samples.size(); ++k) {
        const double y = scan.samples[k].second;
        weights[static_cast<Eigen::Index>(k)] =
            poisson_weighting ? 1.0 / std::sqrt(std::max(y, 1.0)) : 1.0;
    }
    return weights;
}

void evaluate(const DelayScan& scan, const Eigen::VectorXd& weights, const Vector4& p,
              Eigen::VectorXd& residuals, Eigen::MatrixXd& jacobian) {
    const Eigen::Index count = static_cast<Eigen::Index>(scan.samples.size());
    residuals.resize(count);
    jacobian.resize(count, 4);
    for (Eigen::Index k = 0; k < count; ++k) {
        const auto& [delay, y] = scan.samples[static_cast<std::size_t>(k)];
        residuals[k] = weights[k] * (Model::value(p, delay) - y);
        jacobian.row(k) = weights[k] * Model::gradient(p, delay).transpose();
    }
}

}  // namespace

FitResult fit_gaussian(const DelayScan& scan, const FitOptions& options) {
    scan.validate();
    if (scan.samples.size() < 5) {
        throw ValidationError("insufficient data: the Gaussian fit needs at least 5 "
                              "samples, got " + std::to_string(scan.samples.size()));
    }
    if (options.max_iterations < 1) {
        throw ValidationError("max_iterations must be positive");
    }

    Vector4 p = initial_guess(scan, options.mode);
    const Eigen::VectorXd weights = weights_for(scan, options.poisson_weighting);

    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    evaluate(scan, weights, p, residuals, jacobian);
    double cost = weighted_cost(residuals);

    double lambda = 1e-3;
    double last_relative_step = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool stalled = false;
    while (iterations < options.max_iterations) {
        ++iterations;
        const Eigen::Matrix4d normal = jacobian.transpose() * jacobian;
        const Vector4 gradient = jacobian.transpose() * residuals;

        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            Eigen::Matrix4d damped = normal;
            for (int d = 0; d < 4; ++d) {
                damped(d, d) += lambda * std::max(normal(d, d), 1e-300);
            }
            const Vector4 step = damped.ldlt().solve(-gradient);
            if (!step.allFinite()) {
                throw NumericalError("degenerate fit: singular normal equations");
            }
            Vector4 trial = p + step;
            trial[3] = std::abs(trial[3]);  // width sign is a gauge freedom
            if (trial[3] == 0.0) trial[3] = p[3];

            Eigen::VectorXd trial_residuals;
            Eigen::MatrixXd trial_jacobian;
            evaluate(scan, weights, trial, trial_residuals, trial_jacobian);
            const double trial_cost = weighted_cost(trial_residuals);
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                double relative_step = 0.0;
                for (int d = 0; d < 4; ++d) {
                    relative_step = std::max(relative_step,
                                             std::abs(step[d]) / std::max(std::abs(p[d]), 1.0));
                }
                p = trial;
                residuals.swap(trial_residuals);
                jacobian.swap(trial_jacobian);
                cost = trial_cost;
                last_relative_step = relative_step;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e14) break;
            }
        }
        if (!accepted) {
            // no damping level improves the cost: numerically at a minimum
            stalled = true;
            break;
        }
        if (last_relative_step < kStepTolerance) break;
    }

    if (!p.allFinite()) {
        throw NumericalError("degenerate fit: parameters are not finite");
    }

    FitResult result;
    result.baseline = p[0];
    result.visibility = p[1];
    result.center_ps = p[2];
    result.width_ps = std::abs(p[3]);
    result.iterations = iterations;
    result.converged = stalled || last_relative_step <= kConvergedTolerance;

    const Eigen::Index count = static_cast<Eigen::Index>(scan.samples.size());
    result.residual_rms = std::sqrt(cost / static_cast<double>(count));

    // covariance from the unweighted residual variance and the final Jacobian
    const Eigen::Matrix4d normal = jacobian.transpose() * jacobian;
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(normal);
    if (!lu.isInvertible()) {
        throw NumericalError("degenerate fit: singular normal equations");
    }
    const double dof = static_cast<double>(count - 4);
    const double variance = cost / std::max(dof, 1.0);
    const Eigen::Matrix4d covariance = variance * lu.inverse();
    for (int d = 0; d < 4; ++d) {
        result.covariance_diag[static_cast<std::size_t>(d)] = covariance(d, d);
    }
    return result;
}

VisibilityEstimate visibility_uncertainty(const DelayScan& scan,
                                          const BootstrapOptions& options) {
    scan.validate();
    if (options.resamples < 2) {
        throw ValidationError("bootstrap needs at least 2 resamples");
    }

    FitOptions fit_options;
    fit_options.mode = options.mode;
    fit_options.poisson_weighting = options.poisson_weighting;

    const int resamples = options.resamples;
    std::vector<double> draws(static_cast<std::size_t>(resamples),
                              std::numeric_limits<double>::quiet_NaN());

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads(options.threads))
#endif
    for (int r = 0; r < resamples; ++r) {
        auto gen = rng::engine(rng::substream_seed(options.seed, static_cast<std::uint64_t>(r)));
        DelayScan redraw = scan;
        for (auto& [delay, y] : redraw.samples) {
            (void)delay;
            y = y > 0.0 ? static_cast<double>(rng::poisson(gen, y)) : 0.0;
        }
        try {
            const FitResult fit = fit_gaussian(redraw, fit_options);
            if (fit.converged && std::isfinite(fit.visibility)) {
                draws[static_cast<std::size_t>(r)] = fit.visibility;
            }
        } catch (const Error&) {
            // dropped below
        }
    }

    std::vector<double> kept;
    kept.reserve(draws.size());
    for (double v : draws) {
        if (std::isfinite(v)) kept.push_back(v);
    }
    const int failures = resamples - static_cast<int>(kept.size());
    if (failures * 10 > resamples) {
        throw NumericalError("bootstrap unstable: " + std::to_string(failures) + " of " +
                             std::to_string(resamples) + " refits failed");
    }
    if (kept.size() < 2) {
        throw NumericalError("bootstrap needs at least 2 successful refits");
    }

    double mean = 0.0;
    for (double v : kept) mean += v;
    mean /= static_cast<double>(kept.size());
    double variance = 0.0;
    for (double v : kept) variance += (v - mean) * (v - mean);
    variance /= static_cast<double>(kept.size() - 1);

    return VisibilityEstimate{mean, std::sqrt(variance), failures};
}

}  // namespace triphoton
