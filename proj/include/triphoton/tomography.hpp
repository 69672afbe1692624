#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "triphoton/types.hpp"

namespace triphoton {

/// Single-photon counting data: counts(l, i) photons detected at output l
/// when only input i is fed.  Every input column must have at least one
/// positive entry.
class SinglesCounts {
  public:
    SinglesCounts(int outputs, int inputs);

    int outputs() const { return outputs_; }
    int inputs() const { return inputs_; }

    /// 1-based mode labels.
    std::uint64_t count(int output, int input) const;
    void set_count(int output, int input, std::uint64_t value);

    void validate() const;

  private:
    int outputs_;
    int inputs_;
    std::vector<std::uint64_t> counts_;
};

/// One measured or predicted two-photon visibility, keyed by the canonical
/// (i < j, l < m) input/output pairs.  dip_counts / baseline_counts carry the
/// raw C(0) and C(inf) coincidence counts when available (required for
/// Poisson resampling).
struct VisibilityRecord {
    int input_i = 0;
    int input_j = 0;
    int output_l = 0;
    int output_m = 0;
    double value = 0.0;
    double sigma = 0.0;
    std::optional<double> dip_counts;       // C(0)
    std::optional<double> baseline_counts;  // C(inf)

    VisibilityRecord() = default;
    VisibilityRecord(int i, int j, int l, int m, double v, double sig = 0.0);

    std::array<int, 4> key() const { return {input_i, input_j, output_l, output_m}; }
};

/// Reconstruction output.  `matrix` has unit-power columns; sigma grids hold
/// elementwise Monte Carlo standard deviations (amplitudes in the same units
/// as the matrix entries, phases in radians) and are zero unless resampling
/// was run.
struct TomographyResult {
    TransferMatrix matrix;
    RMatrix amplitude_sigma;
    RMatrix phase_sigma;
    int resample_count = 0;
    double phase_fit_residual = 0.0;
};

/// Element amplitudes from singles counts: sqrt(counts / column total), so
/// each column of squared amplitudes sums to one.
RMatrix amplitudes_from_singles(const SinglesCounts& counts);

struct PhaseSolution {
    RMatrix phases;      // radians; row 1 and column 1 fixed to zero
    double residual;     // sum of squared visibility residuals of the winner
};

/// Element phases from two-photon visibilities, in the gauge with zero
/// phases on the first row and column.  Each phase magnitude follows from
/// the visibility of the input pair (1,i) at the output pair (1,l); the
/// signs are resolved by exhaustive search over all combinations against
/// every provided record.  Measurement data determines the matrix only up
/// to complex conjugation; the branch with a nonnegative leading phase
/// is returned.
PhaseSolution phases_from_visibilities(const RMatrix& amplitudes,
                                       const std::vector<VisibilityRecord>& records);

/// Full reconstruction: amplitudes from singles, phases from visibilities.
/// Sigma grids are zero; use monte_carlo for uncertainties.
TomographyResult reconstruct(const SinglesCounts& counts,
                             const std::vector<VisibilityRecord>& records);

/// Predicted two-photon visibilities of `m` for every input pair x output
/// pair, in lexicographic key order.
std::vector<VisibilityRecord> predict_visibilities(const TransferMatrix& m);

/// Mean absolute difference between two visibility sets sharing identical
/// keys.
double q_vis(const std::vector<VisibilityRecord>& measured,
             const std::vector<VisibilityRecord>& predicted);

struct MonteCarloOptions {
    int resamples = 200;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = library default
};

/// Poisson parametric bootstrap around the observed counts: every resample
/// redraws all singles and raw coincidence counts, recomputes visibilities
/// and reruns the reconstruction.  Every record must carry raw counts.
/// Deterministic for a fixed seed regardless of thread count; resamples
/// whose reconstruction fails are dropped (error if more than 10% fail).
TomographyResult monte_carlo(const SinglesCounts& counts,
                             const std::vector<VisibilityRecord>& records,
                             const MonteCarloOptions& options);

}  // namespace triphoton
