#include <doctest.h>

#include <cmath>
#include <vector>

#include "triphoton/errors.hpp"
#include "triphoton/fitting.hpp"

using namespace triphoton;

namespace {

DelayScan model_scan(double baseline, double visibility, double center, double width,
                     double span = 16.0, double step = 0.4) {
    DelayScan scan;
    for (double delay = -span / 2; delay <= span / 2 + 1e-9; delay += step) {
        const double z = (delay - center) / width;
        scan.samples.emplace_back(delay,
                                  baseline * (1.0 - visibility * std::exp(-0.5 * z * z)));
    }
    return scan;
}

}  // namespace

TEST_CASE("noiseless dip recovery") {
    const DelayScan scan = model_scan(1000.0, 0.5, 0.3, 1.2);
    const FitResult fit = fit_gaussian(scan);
    CHECK(fit.converged);
    CHECK(std::abs(fit.baseline - 1000.0) < 1e-6 * 1000.0);
    CHECK(std::abs(fit.visibility - 0.5) < 1e-6 * 0.5);
    CHECK(std::abs(fit.center_ps - 0.3) < 1e-6);
    CHECK(std::abs(fit.width_ps - 1.2) < 1e-6 * 1.2);
    CHECK(fit.residual_rms < 1e-8 * fit.baseline);
}

TEST_CASE("noiseless peak recovery and the implied three-photon visibility") {
    const double v = -1.2581358169445536;  // peak: zero-delay rate above baseline
    const DelayScan scan = model_scan(500.0, v, -0.2, 1.5);
    const FitResult fit = fit_gaussian(scan, FitOptions{FitMode::kPeak});
    CHECK(fit.converged);
    CHECK(std::abs(fit.visibility - v) < 1e-6 * std::abs(v));
    CHECK(fit.threefold_visibility() ==
          doctest::Approx(v / (1.0 - v)).epsilon(1e-12));
    CHECK(fit.threefold_visibility() < 0.0);
}

TEST_CASE("auto mode resolves dip versus peak from the data") {
    const FitResult dip = fit_gaussian(model_scan(800.0, 0.4, 0.0, 1.0));
    CHECK(dip.visibility > 0.0);
    const FitResult peak = fit_gaussian(model_scan(800.0, -0.7, 0.0, 1.0));
    CHECK(peak.visibility < 0.0);
    CHECK(std::abs(peak.visibility + 0.7) < 1e-6);
}

TEST_CASE("reflecting data about the baseline flips the visibility sign only") {
    const DelayScan dip_scan = model_scan(600.0, 0.45, 0.1, 0.9);
    DelayScan peak_scan = dip_scan;
    for (auto& [delay, value] : peak_scan.samples) value = 1200.0 - value;
    const FitResult dip = fit_gaussian(dip_scan);
    const FitResult peak = fit_gaussian(peak_scan);
    CHECK(std::abs(dip.visibility + peak.visibility) < 1e-8);
    CHECK(std::abs(dip.width_ps - peak.width_ps) < 1e-8);
    CHECK(std::abs(dip.center_ps - peak.center_ps) < 1e-8);
}

TEST_CASE("poisson weighting leaves noiseless recovery unchanged") {
    const DelayScan scan = model_scan(1000.0, 0.5, 0.0, 1.2);
    FitOptions options;
    options.poisson_weighting = true;
    const FitResult fit = fit_gaussian(scan, options);
    CHECK(std::abs(fit.visibility - 0.5) < 1e-6);
    CHECK(std::abs(fit.width_ps - 1.2) < 1e-6);
}

TEST_CASE("covariance diagonal is positive for noisy data") {
    DelayScan scan = model_scan(1000.0, 0.5, 0.0, 1.2);
    // deterministic wiggle standing in for counting noise
    for (std::size_t k = 0; k < scan.samples.size(); ++k) {
        scan.samples[k].second += 3.0 * std::sin(17.0 * static_cast<double>(k));
    }
    const FitResult fit = fit_gaussian(scan);
    for (double var : fit.covariance_diag) CHECK(var > 0.0);
    CHECK(fit.residual_rms > 0.0);
}

TEST_CASE("fit input validation") {
    DelayScan tiny;
    tiny.samples = {{-1.0, 2.0}, {0.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(fit_gaussian(tiny), ValidationError);

    DelayScan flat_delays;
    flat_delays.samples = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(fit_gaussian(flat_delays), ValidationError);

    DelayScan negative_edge = model_scan(100.0, 0.5, 0.0, 1.0);
    negative_edge.samples.front().second = 0.0;
    negative_edge.samples.back().second = 0.0;
    CHECK_THROWS_AS(fit_gaussian(negative_edge), NumericalError);
}

TEST_CASE("bootstrap visibility uncertainty is deterministic and sane") {
    DelayScan scan = model_scan(20000.0, 0.5, 0.0, 1.5, 16.0, 0.5);
    BootstrapOptions options;
    options.resamples = 60;
    options.seed = 42;
    const VisibilityEstimate first = visibility_uncertainty(scan, options);
    const VisibilityEstimate second = visibility_uncertainty(scan, options);
    CHECK(first.visibility == second.visibility);
    CHECK(first.sigma == second.sigma);
    CHECK(first.sigma > 0.0);
    CHECK(std::abs(first.visibility - 0.5) < 5.0 * first.sigma);
    CHECK(first.failed_resamples == 0);

    options.threads = 8;
    const VisibilityEstimate threaded = visibility_uncertainty(scan, options);
    CHECK(threaded.visibility == first.visibility);
    CHECK(threaded.sigma == first.sigma);
}
