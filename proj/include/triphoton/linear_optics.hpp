#pragma once

#include <utility>
#include <vector>

#include "triphoton/types.hpp"

namespace triphoton {

/// p x p matrix built from M by repeating column i once per photon in input
/// mode i and row l once per photon in output mode l.  Input and output must
/// hold the same number of photons.
CMatrix scattering_submatrix(const TransferMatrix& m,
                             const PhotonConfiguration& input,
                             const PhotonConfiguration& output);

/// Transition rate for fully indistinguishable photons,
/// |perm(submatrix)|^2 / (prod s_i! prod t_l!).  For a unitary matrix the
/// rates over all outputs of fixed photon number sum to one; for non-unitary
/// matrices they are relative rates.  p <= 8.
double rate_indistinguishable(const TransferMatrix& m,
                              const PhotonConfiguration& input,
                              const PhotonConfiguration& output);

/// Classical transition rate for fully distinguishable photons,
/// perm(|submatrix|^2 elementwise) / prod t_l!.
double rate_distinguishable(const TransferMatrix& m,
                            const PhotonConfiguration& input,
                            const PhotonConfiguration& output);

/// All output configurations of `input.total_photons()` photons over the
/// output modes of `m` with their indistinguishable rates, in lexicographic
/// key order.  Requires p <= 5 and at most 8 output modes.
std::vector<std::pair<PhotonConfiguration, double>> output_distribution(
    const TransferMatrix& m, const PhotonConfiguration& input,
    bool collision_free_only = false);

}  // namespace triphoton
