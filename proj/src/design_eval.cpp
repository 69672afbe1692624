#include "triphoton/design_eval.hpp"

#include <cmath>
#include <numbers>

namespace triphoton {

TransferMatrix ideal_tritter() {
    return dft_target(3);
}

TransferMatrix dft_target(int n) {
    if (n < 2) {
        throw ValidationError("DFT target needs at least 2 modes, got " + std::to_string(n));
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix entries(n, n);
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(l) *
                                 static_cast<double>(i) / static_cast<double>(n);
            entries(l, i) = std::polar(norm, phase);
        }
    }
    return TransferMatrix(std::move(entries));
}

TransferMatrix example_lossy_tritter() {
    const double magnitudes[3][3] = {{1.016, 0.995, 1.039},
                                     {1.013, 0.904, 0.686},
                                     {1.022, 0.699, 1.199}};
    const double phases_pi[3][3] = {{-0.036, 0.059, -0.018},
                                    {-0.058, 0.610, -0.748},
                                    {0.020, -0.577, 0.814}};
    const double scale = 1.0 / std::sqrt(3.0);
    CMatrix entries(3, 3);
    for (int l = 0; l < 3; ++l) {
        for (int i = 0; i < 3; ++i) {
            entries(l, i) = scale * from_polar_pi(magnitudes[l][i], phases_pi[l][i]);
        }
    }
    return TransferMatrix(std::move(entries));
}

TargetSpec::TargetSpec(TransferMatrix target_matrix, std::string target_label)
    : target(std::move(target_matrix)), label(std::move(target_label)) {
    for (int i = 0; i < target.cols(); ++i) {
        const double norm = target.entries().col(i).norm();
        if (std::abs(norm - 1.0) > 1e-12) {
            throw ValidationError("target column " + std::to_string(i + 1) +
                                  " is not unit norm (got " + std::to_string(norm) + ")");
        }
    }
}

double fom_per_input(const TransferMatrix& candidate, const TargetSpec& target, int input) {
    if (candidate.rows() != target.target.rows() || candidate.cols() != target.target.cols()) {
        throw ValidationError("candidate and target dimensions differ");
    }
    if (input < 1 || input > candidate.cols()) {
        throw ValidationError("input index " + std::to_string(input) + " out of range");
    }
    const Complex overlap =
        target.target.entries().col(input - 1).dot(candidate.entries().col(input - 1));
    return std::abs(overlap);
}

double fom_overall(const TransferMatrix& candidate, const TargetSpec& target) {
    double sum = 0.0;
    for (int input = 1; input <= candidate.cols(); ++input) {
        sum += fom_per_input(candidate, target, input);
    }
    return sum / static_cast<double>(candidate.cols());
}

}  // namespace triphoton
