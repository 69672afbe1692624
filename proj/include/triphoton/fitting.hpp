#pragma once

#include <array>
#include <cstdint>

#include "triphoton/distinguishability.hpp"

namespace triphoton {

enum class FitMode { kDip, kPeak, kAuto };

/// Least-squares parameters of the model
///   C(delta) = A (1 - V exp(-(delta - delta0)^2 / (2 w^2))).
/// V > 0 describes a dip, V < 0 a peak.
struct FitResult {
    double baseline = 0.0;        // A
    double visibility = 0.0;      // V
    double center_ps = 0.0;       // delta0
    double width_ps = 0.0;        // w
    double residual_rms = 0.0;
    std::array<double, 4> covariance_diag{};  // var(A), var(V), var(delta0), var(w)
    bool converged = false;
    int iterations = 0;

    /// Three-photon visibility implied by a fitted peak: with C(inf) = A and
    /// C(0) = A (1 - V), (C(inf) - C(0)) / C(0) = V / (1 - V).
    double threefold_visibility() const { return visibility / (1.0 - visibility); }
};

struct FitOptions {
    FitMode mode = FitMode::kAuto;
    bool poisson_weighting = false;
    int max_iterations = 200;
};

/// Damped Gauss-Newton fit of the Gaussian dip/peak model with analytic
/// Jacobian.  Needs at least five samples and a scan that reaches the
/// baseline region (samples at least two initial widths away from the
/// extremum).
FitResult fit_gaussian(const DelayScan& scan, const FitOptions& options = {});

struct BootstrapOptions {
    int resamples = 200;
    std::uint64_t seed = 0;
    int threads = 0;
    FitMode mode = FitMode::kAuto;
    bool poisson_weighting = false;
};

struct VisibilityEstimate {
    double visibility = 0.0;  // mean over resamples
    double sigma = 0.0;       // standard deviation over resamples
    int failed_resamples = 0;
};

/// Poisson bootstrap of the fitted visibility: every sample value is redrawn
/// as Poisson with the observed value as mean, the scan is refitted, and the
/// mean and standard deviation of V over the resamples are returned.
/// Deterministic for a fixed seed; errors out if more than 10% of the refits
/// fail.
VisibilityEstimate visibility_uncertainty(const DelayScan& scan,
                                          const BootstrapOptions& options);

}  // namespace triphoton
