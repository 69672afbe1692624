#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triphoton/types.hpp"

namespace triphoton {

/// A photon pair delayed by at least this many coherence widths is treated
/// as fully distinguishable (Gaussian overlap below 1e-12).
inline constexpr double kDistinguishableDelayFactor = 15.0;

/// Gaussian wavepackets of common coherence width with per-photon arrival
/// delays.  All times in picoseconds.
struct WavepacketModel {
    double coherence_width_ps = 1.5;
    std::vector<double> center_delays_ps;
};

/// Hermitian matrix of pairwise overlaps between the photons' internal
/// states.  Identity = fully distinguishable photons, all-ones = identical.
class GramMatrix {
  public:
    explicit GramMatrix(CMatrix entries);

    static GramMatrix identity(int order);
    static GramMatrix ones(int order);
    /// One photon fully distinguishable from the rest, the rest identical.
    /// This is the delay -> infinity limit of a single swept delay stage.
    static GramMatrix one_distinguishable(int order, int distinguishable_photon);

    int order() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& entries() const { return entries_; }

  private:
    CMatrix entries_;
};

/// Overlap matrix of the model's wavepackets: entry (j,k) =
/// exp(-(delta_j - delta_k)^2 / (4 sigma^2)).  Real symmetric, unit diagonal.
GramMatrix gram_from_delays(const WavepacketModel& model, int photon_count);

/// Coincidence rate for partially distinguishable photons: the double sum
/// over permutation pairs (sigma, tau) of
///   prod_k S[sigma(k), tau(k)] M[d_k, i_sigma(k)] conj(M[d_k, i_tau(k)]).
/// Requires single-occupancy input modes, a collision-free output pattern
/// and p <= 5.  Reduces to rate_distinguishable for S = I and to
/// rate_indistinguishable for S = all-ones.
double rate_partial(const TransferMatrix& m, const PhotonConfiguration& input,
                    const PhotonConfiguration& output, const GramMatrix& overlaps);

/// One scanned dip or peak: samples of (relative delay in ps, rate or counts)
/// for a single input/output combination.
struct DelayScan {
    std::string input_label;
    std::string output_label;
    std::vector<std::pair<double, double>> samples;
    double integration_time_s = 60.0;

    void validate() const;  // delays strictly increasing, values nonnegative
};

/// Two-photon coincidence curve over `delays`: photon at the first input is
/// fixed, the second is delayed by each entry.  Samples may be evaluated in
/// parallel; output order always follows `delays`.
DelayScan hom_curve(const TransferMatrix& m, std::pair<int, int> inputs,
                    std::pair<int, int> outputs, std::span<const double> delays,
                    double sigma_ps, int threads = 0);

/// Three-photon coincidence curve with the delay swept on one photon
/// (1-based position in `inputs`); the other photons stay at zero delay.
DelayScan threefold_curve(const TransferMatrix& m, std::array<int, 3> inputs,
                          std::array<int, 3> outputs, int delayed_photon,
                          std::span<const double> delays, double sigma_ps,
                          int threads = 0);

/// Two-photon visibility (C(inf) - C(0)) / C(inf); positive for a dip.
double visibility_two(double rate_delayed, double rate_zero_delay);

/// Three-photon visibility (C(inf) - C(0)) / C(0); negative for a peak.
double visibility_three(double rate_delayed, double rate_zero_delay);

/// Two-photon visibility of `m` for one input/output pair, from the exact
/// distinguishable and indistinguishable rates.
double hom_visibility(const TransferMatrix& m, std::pair<int, int> inputs,
                      std::pair<int, int> outputs);

/// Three-photon visibility from the exact limits of rate_partial: C(0) with
/// all photons identical, C(inf) with only `delayed_photon` walked off.
/// This matches a delay scan of a single stage, where the undelayed photons
/// keep interfering.
double threefold_visibility(const TransferMatrix& m, std::array<int, 3> inputs,
                            std::array<int, 3> outputs, int delayed_photon);

/// Variant with all three photons mutually distinguishable at C(inf),
/// i.e. (rate_distinguishable - rate_indistinguishable) / rate_indistinguishable.
double threefold_visibility_fully_distinguishable(const TransferMatrix& m,
                                                  std::array<int, 3> inputs,
                                                  std::array<int, 3> outputs);

}  // namespace triphoton
