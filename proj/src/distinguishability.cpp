#include "triphoton/distinguishability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "triphoton/linear_optics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triphoton {

namespace {

constexpr double kGramTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-10;

std::vector<std::vector<int>> all_permutations(int p) {
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> result;
    do {
        result.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return result;
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

DelayScan synthesize_curve(const TransferMatrix& m, const PhotonConfiguration& input,
                           const PhotonConfiguration& output,
                           const std::vector<double>& photon_delays, int delayed_photon,
                           std::span<const double> delays, double sigma_ps, int threads) {
    DelayScan scan;
    scan.input_label = input.label();
    scan.output_label = output.label();
    scan.samples.resize(delays.size());

    const auto sample_count = static_cast<std::int64_t>(delays.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
#endif
    for (std::int64_t k = 0; k < sample_count; ++k) {
        WavepacketModel model;
        model.coherence_width_ps = sigma_ps;
        model.center_delays_ps = photon_delays;
        model.center_delays_ps[static_cast<std::size_t>(delayed_photon - 1)] =
            delays[static_cast<std::size_t>(k)];
        const GramMatrix overlaps = gram_from_delays(model, input.total_photons());
        scan.samples[static_cast<std::size_t>(k)] = {delays[static_cast<std::size_t>(k)],
                                                     rate_partial(m, input, output, overlaps)};
    }
#ifndef _OPENMP
    (void)threads;
#endif
    scan.validate();
    return scan;
}

}  // namespace

GramMatrix::GramMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw ValidationError("overlap matrix must be square and non-empty");
    }
    const int p = order();
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kGramTolerance) {
        throw ValidationError("overlap matrix is not Hermitian");
    }
    for (int j = 0; j < p; ++j) {
        if (std::abs(entries_(j, j) - Complex(1.0, 0.0)) > kGramTolerance) {
            throw ValidationError("overlap matrix diagonal must be one");
        }
        for (int k = 0; k < p; ++k) {
            if (std::abs(entries_(j, k)) > 1.0 + kGramTolerance) {
                throw ValidationError("overlap magnitudes cannot exceed one");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_);
    if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw ValidationError("overlap matrix is not positive semidefinite");
    }
}

GramMatrix GramMatrix::identity(int order) {
    return GramMatrix(CMatrix::Identity(order, order));
}

GramMatrix GramMatrix::ones(int order) {
    return GramMatrix(CMatrix::Ones(order, order));
}

GramMatrix GramMatrix::one_distinguishable(int order, int distinguishable_photon) {
    if (distinguishable_photon < 1 || distinguishable_photon > order) {
        throw ValidationError("distinguishable photon index out of range");
    }
    CMatrix entries = CMatrix::Ones(order, order);
    for (int k = 0; k < order; ++k) {
        if (k != distinguishable_photon - 1) {
            entries(distinguishable_photon - 1, k) = 0.0;
            entries(k, distinguishable_photon - 1) = 0.0;
        }
    }
    return GramMatrix(std::move(entries));
}

GramMatrix gram_from_delays(const WavepacketModel& model, int photon_count) {
    if (!(model.coherence_width_ps > 0.0) || !std::isfinite(model.coherence_width_ps)) {
        throw ValidationError("coherence width must be finite and positive");
    }
    if (static_cast<int>(model.center_delays_ps.size()) != photon_count) {
        throw ValidationError("model carries " + std::to_string(model.center_delays_ps.size()) +
                              " delays for " + std::to_string(photon_count) + " photons");
    }
    for (double delay : model.center_delays_ps) {
        if (!std::isfinite(delay)) throw ValidationError("photon delays must be finite");
    }

    const double four_sigma_sq = 4.0 * model.coherence_width_ps * model.coherence_width_ps;
    CMatrix entries(photon_count, photon_count);
    for (int j = 0; j < photon_count; ++j) {
        for (int k = 0; k < photon_count; ++k) {
            const double diff = model.center_delays_ps[static_cast<std::size_t>(j)] -
                                model.center_delays_ps[static_cast<std::size_t>(k)];
            entries(j, k) = std::exp(-diff * diff / four_sigma_sq);
        }
    }
    return GramMatrix(std::move(entries));
}

double rate_partial(const TransferMatrix& m, const PhotonConfiguration& input,
                    const PhotonConfiguration& output, const GramMatrix& overlaps) {
    const int p = input.total_photons();
    if (p > 5) {
        throw ValidationError("rate_partial supports at most 5 photons, got " +
                              std::to_string(p));
    }
    if (!input.collision_free()) {
        throw ValidationError("rate_partial needs single-occupancy inputs, got " +
                              input.label());
    }
    if (!output.collision_free()) {
        throw ValidationError("rate_partial needs a collision-free output, got " +
                              output.label());
    }
    if (output.total_photons() != p) {
        throw ValidationError("photon numbers differ between input " + input.label() +
                              " and output " + output.label());
    }
    if (overlaps.order() != p) {
        throw ValidationError("overlap matrix order " + std::to_string(overlaps.order()) +
                              " does not match photon number " + std::to_string(p));
    }
    check_modes_in_range(m, input, /*for_output=*/false, "input");
    check_modes_in_range(m, output, /*for_output=*/true, "output");

    const auto in_modes = input.modes();
    const auto out_modes = output.modes();
    const auto perms = all_permutations(p);
    const CMatrix& s = overlaps.entries();

    // prod_k S M M* factors over k, so precompute the path amplitude of each
    // permutation once.
    std::vector<Complex> path(perms.size());
    for (std::size_t a = 0; a < perms.size(); ++a) {
        Complex product(1.0, 0.0);
        for (int k = 0; k < p; ++k) {
            product *= m.entries()(out_modes[static_cast<std::size_t>(k)] - 1,
                                   in_modes[static_cast<std::size_t>(perms[a][static_cast<std::size_t>(k)])] - 1);
        }
        path[a] = product;
    }

    Complex total(0.0, 0.0);
    for (std::size_t a = 0; a < perms.size(); ++a) {
        for (std::size_t b = 0; b < perms.size(); ++b) {
            Complex weight(1.0, 0.0);
            for (int k = 0; k < p; ++k) {
                weight *= s(perms[a][static_cast<std::size_t>(k)],
                            perms[b][static_cast<std::size_t>(k)]);
            }
            total += weight * path[a] * std::conj(path[b]);
        }
    }

    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real()))) {
        std::ostringstream msg;
        msg << "partial rate has non-real value " << total.real() << " + " << total.imag()
            << "i for input " << input.label() << " output " << output.label();
        throw NumericalError(msg.str());
    }
    return total.real();
}

void DelayScan::validate() const {
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!std::isfinite(samples[k].first) || !std::isfinite(samples[k].second)) {
            throw ValidationError("delay scan samples must be finite");
        }
        if (samples[k].second < 0.0) {
            throw ValidationError("delay scan values must be nonnegative");
        }
        if (k > 0 && !(samples[k].first > samples[k - 1].first)) {
            throw ValidationError("delay scan delays must be strictly increasing");
        }
    }
}

DelayScan hom_curve(const TransferMatrix& m, std::pair<int, int> inputs,
                    std::pair<int, int> outputs, std::span<const double> delays,
                    double sigma_ps, int threads) {
    if (inputs.first == inputs.second) {
        throw ValidationError("HOM curve needs two distinct input modes");
    }
    if (outputs.first == outputs.second) {
        throw ValidationError("HOM curve needs two distinct output modes");
    }
    const PhotonConfiguration input{inputs.first, inputs.second};
    const PhotonConfiguration output{outputs.first, outputs.second};
    // photon 1 sits at the input listed first; photon 2 carries the delay
    const int delayed = inputs.second == input.modes()[1] ? 2 : 1;
    return synthesize_curve(m, input, output, {0.0, 0.0}, delayed, delays, sigma_ps, threads);
}

DelayScan threefold_curve(const TransferMatrix& m, std::array<int, 3> inputs,
                          std::array<int, 3> outputs, int delayed_photon,
                          std::span<const double> delays, double sigma_ps, int threads) {
    if (delayed_photon < 1 || delayed_photon > 3) {
        throw ValidationError("delayed photon index must be 1, 2 or 3");
    }
    const PhotonConfiguration input{inputs[0], inputs[1], inputs[2]};
    const PhotonConfiguration output{outputs[0], outputs[1], outputs[2]};
    if (!input.collision_free() || !output.collision_free()) {
        throw ValidationError("threefold curve needs distinct inputs and outputs");
    }
    // map the delayed photon from its position in `inputs` to the sorted order
    const int delayed_mode = inputs[static_cast<std::size_t>(delayed_photon - 1)];
    const auto sorted = input.modes();
    const int sorted_position =
        static_cast<int>(std::find(sorted.begin(), sorted.end(), delayed_mode) -
                         sorted.begin()) + 1;
    return synthesize_curve(m, input, output, {0.0, 0.0, 0.0}, sorted_position, delays,
                            sigma_ps, threads);
}

double visibility_two(double rate_delayed, double rate_zero_delay) {
    if (!(rate_delayed > 0.0)) {
        throw NumericalError("two-photon visibility undefined: C(inf) is zero");
    }
    return (rate_delayed - rate_zero_delay) / rate_delayed;
}

double visibility_three(double rate_delayed, double rate_zero_delay) {
    if (!(rate_zero_delay > 0.0)) {
        throw NumericalError("three-photon visibility undefined: C(0) is zero");
    }
    return (rate_delayed - rate_zero_delay) / rate_zero_delay;
}

double hom_visibility(const TransferMatrix& m, std::pair<int, int> inputs,
                      std::pair<int, int> outputs) {
    const PhotonConfiguration input{inputs.first, inputs.second};
    const PhotonConfiguration output{outputs.first, outputs.second};
    return visibility_two(rate_distinguishable(m, input, output),
                          rate_indistinguishable(m, input, output));
}

double threefold_visibility(const TransferMatrix& m, std::array<int, 3> inputs,
                            std::array<int, 3> outputs, int delayed_photon) {
    const PhotonConfiguration input{inputs[0], inputs[1], inputs[2]};
    const PhotonConfiguration output{outputs[0], outputs[1], outputs[2]};
    const int delayed_mode = inputs[static_cast<std::size_t>(delayed_photon - 1)];
    const auto sorted = input.modes();
    const int sorted_position =
        static_cast<int>(std::find(sorted.begin(), sorted.end(), delayed_mode) -
                         sorted.begin()) + 1;
    const double c_inf =
        rate_partial(m, input, output, GramMatrix::one_distinguishable(3, sorted_position));
    const double c_zero = rate_partial(m, input, output, GramMatrix::ones(3));
    return visibility_three(c_inf, c_zero);
}

double threefold_visibility_fully_distinguishable(const TransferMatrix& m,
                                                  std::array<int, 3> inputs,
                                                  std::array<int, 3> outputs) {
    const PhotonConfiguration input{inputs[0], inputs[1], inputs[2]};
    const PhotonConfiguration output{outputs[0], outputs[1], outputs[2]};
    return visibility_three(rate_distinguishable(m, input, output),
                            rate_indistinguishable(m, input, output));
}

}  // namespace triphoton
