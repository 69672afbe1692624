#include "triphoton/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace triphoton {

Complex from_polar_pi(double magnitude, double phase_pi) {
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude) || !std::isfinite(phase_pi)) {
        throw ValidationError("polar amplitude needs finite magnitude >= 0 and finite phase");
    }
    return std::polar(magnitude, phase_pi * std::numbers::pi);
}

double phase_in_pi_units(Complex value) {
    return std::arg(value) / std::numbers::pi;
}

TransferMatrix::TransferMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1) {
        throw ValidationError("transfer matrix needs at least one row and one column");
    }
    if (!entries_.allFinite()) {
        throw ValidationError("transfer matrix entries must be finite");
    }
}

Complex TransferMatrix::at_modes(int out_mode, int in_mode) const {
    if (out_mode < 1 || out_mode > rows() || in_mode < 1 || in_mode > cols()) {
        std::ostringstream msg;
        msg << "mode pair (" << out_mode << "," << in_mode << ") outside a " << rows()
            << "x" << cols() << " matrix";
        throw ValidationError(msg.str());
    }
    return entries_(out_mode - 1, in_mode - 1);
}

bool TransferMatrix::is_unitary(double tol) const {
    if (rows() != cols()) return false;
    CMatrix gram = entries_.adjoint() * entries_;
    return (gram - CMatrix::Identity(rows(), cols())).cwiseAbs().maxCoeff() <= tol;
}

PhotonConfiguration::PhotonConfiguration(std::vector<int> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) {
        throw ValidationError("photon configuration needs at least one photon");
    }
    std::sort(modes_.begin(), modes_.end());
    if (modes_.front() < 1) {
        throw ValidationError("mode labels are 1-based; got " + std::to_string(modes_.front()));
    }
}

PhotonConfiguration::PhotonConfiguration(std::initializer_list<int> modes)
    : PhotonConfiguration(std::vector<int>(modes)) {}

PhotonConfiguration PhotonConfiguration::from_occupations(
    const std::vector<std::pair<int, int>>& mode_occupation_pairs) {
    std::vector<int> modes;
    for (const auto& [mode, occupation] : mode_occupation_pairs) {
        if (occupation < 1) {
            throw ValidationError("occupations must be positive");
        }
        modes.insert(modes.end(), static_cast<std::size_t>(occupation), mode);
    }
    return PhotonConfiguration(std::move(modes));
}

std::vector<std::pair<int, int>> PhotonConfiguration::occupations() const {
    std::vector<std::pair<int, int>> result;
    for (int mode : modes_) {
        if (!result.empty() && result.back().first == mode) {
            ++result.back().second;
        } else {
            result.emplace_back(mode, 1);
        }
    }
    return result;
}

double PhotonConfiguration::occupation_factorial_product() const {
    double product = 1.0;
    for (const auto& [mode, occupation] : occupations()) {
        for (int k = 2; k <= occupation; ++k) product *= k;
    }
    return product;
}

bool PhotonConfiguration::collision_free() const {
    return std::adjacent_find(modes_.begin(), modes_.end()) == modes_.end();
}

std::string PhotonConfiguration::label() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        if (k > 0) out << ',';
        out << modes_[k];
    }
    out << '}';
    return out.str();
}

void check_modes_in_range(const TransferMatrix& m, const PhotonConfiguration& config,
                          bool for_output, const char* what) {
    const int limit = for_output ? m.rows() : m.cols();
    if (config.max_mode() > limit) {
        std::ostringstream msg;
        msg << what << " configuration " << config.label() << " addresses mode "
            << config.max_mode() << " but the matrix has " << limit
            << (for_output ? " output" : " input") << " modes";
        throw ValidationError(msg.str());
    }
}

}  // namespace triphoton
