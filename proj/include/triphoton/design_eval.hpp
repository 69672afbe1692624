#pragma once

#include <string>

#include "triphoton/types.hpp"

namespace triphoton {

/// Balanced 3x3 multiport splitter: (1/sqrt(3)) [[1,1,1],[1,w,w*],[1,w*,w]]
/// with w = exp(i 2 pi / 3).  Unitary to machine precision.
TransferMatrix ideal_tritter();

/// n-mode discrete Fourier transform matrix, entry (l,i) =
/// exp(i 2 pi (l-1)(i-1) / n) / sqrt(n).  Matches ideal_tritter for n = 3.
TransferMatrix dft_target(int n);

/// Transfer matrix of a fabricated, slightly lossy and unbalanced tritter as
/// obtained from single- and two-photon tomography.  Non-unitary; used by
/// the bundled demo dataset and the regression tests.
TransferMatrix example_lossy_tritter();

/// A target matrix for design scoring.  Target columns must be unit norm.
struct TargetSpec {
    TransferMatrix target;
    std::string label;

    TargetSpec(TransferMatrix target_matrix, std::string target_label);
};

/// Overlap figure of merit for one input (1-based):
/// |sum_l conj(target[l,i]) candidate[l,i]|.  Equals 1 exactly when the
/// candidate column matches the target column up to a global phase at unit
/// norm; bounded by the candidate column norm.
double fom_per_input(const TransferMatrix& candidate, const TargetSpec& target,
                     int input);

/// Arithmetic mean of fom_per_input over all inputs.
double fom_overall(const TransferMatrix& candidate, const TargetSpec& target);

}  // namespace triphoton
