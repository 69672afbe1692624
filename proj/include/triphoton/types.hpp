#pragma once

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triphoton/errors.hpp"

namespace triphoton {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Builds a complex amplitude from a magnitude and a phase given in units
/// of pi (the convention used by all external polar representations).
Complex from_polar_pi(double magnitude, double phase_pi);

/// Phase of an amplitude in units of pi, in (-1, 1].
double phase_in_pi_units(Complex value);

/// Complex m x n transfer matrix mapping input-mode to output-mode field
/// amplitudes.  Not required to be unitary; for lossy devices the rates
/// derived from it are relative, and only their ratios are physical.
class TransferMatrix {
  public:
    explicit TransferMatrix(CMatrix entries);

    int rows() const { return static_cast<int>(entries_.rows()); }
    int cols() const { return static_cast<int>(entries_.cols()); }
    const CMatrix& entries() const { return entries_; }

    /// Entry by 1-based mode labels (output l, input i).
    Complex at_modes(int out_mode, int in_mode) const;

    bool is_unitary(double tol = 1e-12) const;

  private:
    CMatrix entries_;
};

/// Multiset of mode indices occupied by photons.  Mode labels are 1-based
/// everywhere in the public interface; occupations are encoded by repeating
/// the label.  Ordering is lexicographic on the sorted label list.
class PhotonConfiguration {
  public:
    explicit PhotonConfiguration(std::vector<int> modes);
    PhotonConfiguration(std::initializer_list<int> modes);

    static PhotonConfiguration from_occupations(
        const std::vector<std::pair<int, int>>& mode_occupation_pairs);

    int total_photons() const { return static_cast<int>(modes_.size()); }
    /// Sorted 1-based mode labels, one entry per photon.
    std::span<const int> modes() const { return modes_; }
    int max_mode() const { return modes_.back(); }

    /// (mode, occupation) pairs, ascending in mode.
    std::vector<std::pair<int, int>> occupations() const;
    /// Product of the factorials of all occupations.
    double occupation_factorial_product() const;
    /// True when no mode holds more than one photon.
    bool collision_free() const;

    /// Label of the form "{1,2,3}" used in scan metadata and messages.
    std::string label() const;

    friend auto operator<=>(const PhotonConfiguration&,
                            const PhotonConfiguration&) = default;

  private:
    std::vector<int> modes_;  // sorted ascending, 1-based
};

/// Throws ValidationError unless every mode of `config` addresses a valid
/// row (for_output) or column (for_input) of `m`.
void check_modes_in_range(const TransferMatrix& m,
                          const PhotonConfiguration& config, bool for_output,
                          const char* what);

}  // namespace triphoton
