#include "triphoton/linear_optics.hpp"

#include <sstream>

#include "triphoton/permanent.hpp"

namespace triphoton {

namespace {

void check_photon_numbers(const TransferMatrix& m, const PhotonConfiguration& input,
                          const PhotonConfiguration& output, int max_photons) {
    if (input.total_photons() != output.total_photons()) {
        std::ostringstream msg;
        msg << "photon numbers differ: input " << input.label() << " holds "
            << input.total_photons() << ", output " << output.label() << " holds "
            << output.total_photons();
        throw ValidationError(msg.str());
    }
    if (input.total_photons() > max_photons) {
        throw ValidationError("photon number " + std::to_string(input.total_photons()) +
                              " exceeds the supported limit " + std::to_string(max_photons));
    }
    check_modes_in_range(m, input, /*for_output=*/false, "input");
    check_modes_in_range(m, output, /*for_output=*/true, "output");
}

// Multisets of `photons` photons over modes 1..mode_count, lexicographic.
void enumerate_outputs(int mode_count, int photons, bool collision_free_only,
                       std::vector<int>& current, int next_mode,
                       std::vector<PhotonConfiguration>& result) {
    if (static_cast<int>(current.size()) == photons) {
        result.emplace_back(current);
        return;
    }
    for (int mode = next_mode; mode <= mode_count; ++mode) {
        current.push_back(mode);
        enumerate_outputs(mode_count, photons, collision_free_only, current,
                          collision_free_only ? mode + 1 : mode, result);
        current.pop_back();
    }
}

}  // namespace

CMatrix scattering_submatrix(const TransferMatrix& m, const PhotonConfiguration& input,
                             const PhotonConfiguration& output) {
    check_photon_numbers(m, input, output, 64);
    const auto in_modes = input.modes();
    const auto out_modes = output.modes();
    const int p = input.total_photons();

    CMatrix sub(p, p);
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) {
            sub(r, c) = m.entries()(out_modes[static_cast<std::size_t>(r)] - 1,
                                    in_modes[static_cast<std::size_t>(c)] - 1);
        }
    }
    return sub;
}

double rate_indistinguishable(const TransferMatrix& m, const PhotonConfiguration& input,
                              const PhotonConfiguration& output) {
    check_photon_numbers(m, input, output, 8);
    const Complex amplitude = permanent_ryser(scattering_submatrix(m, input, output));
    const double norm = input.occupation_factorial_product() *
                        output.occupation_factorial_product();
    return std::norm(amplitude) / norm;
}

double rate_distinguishable(const TransferMatrix& m, const PhotonConfiguration& input,
                            const PhotonConfiguration& output) {
    check_photon_numbers(m, input, output, 8);
    const CMatrix sub = scattering_submatrix(m, input, output);
    const CMatrix probabilities = sub.cwiseAbs2().cast<Complex>();
    const Complex value = permanent_ryser(probabilities);
    return value.real() / output.occupation_factorial_product();
}

std::vector<std::pair<PhotonConfiguration, double>> output_distribution(
    const TransferMatrix& m, const PhotonConfiguration& input, bool collision_free_only) {
    const int p = input.total_photons();
    if (p > 5) {
        throw ValidationError("output_distribution supports at most 5 photons, got " +
                              std::to_string(p));
    }
    if (m.rows() > 8) {
        throw ValidationError("output_distribution supports at most 8 output modes, got " +
                              std::to_string(m.rows()));
    }
    check_modes_in_range(m, input, /*for_output=*/false, "input");

    std::vector<PhotonConfiguration> outputs;
    std::vector<int> scratch;
    enumerate_outputs(m.rows(), p, collision_free_only, scratch, 1, outputs);

    std::vector<std::pair<PhotonConfiguration, double>> distribution;
    distribution.reserve(outputs.size());
    for (const PhotonConfiguration& output : outputs) {
        distribution.emplace_back(output, rate_indistinguishable(m, input, output));
    }
    return distribution;
}

}  // namespace triphoton
