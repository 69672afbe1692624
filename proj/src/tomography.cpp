#include "triphoton/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "triphoton/linear_optics.hpp"
#include "triphoton/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triphoton {

namespace {

constexpr double kCosineSlack = 1e-6;

double wrap_angle(double radians) {
    double wrapped = std::remainder(radians, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
    return wrapped;
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

std::string key_string(const std::array<int, 4>& key) {
    std::ostringstream out;
    out << "(" << key[0] << "," << key[1] << "," << key[2] << "," << key[3] << ")";
    return out.str();
}

// Predicted visibility of the amplitude/phase grid for one record key,
// from the exact two-photon rates of the corresponding 2x2 submatrix.
double predicted_visibility(const RMatrix& amplitudes, const RMatrix& phases,
                            const VisibilityRecord& record) {
    const int i = record.input_i - 1, j = record.input_j - 1;
    const int l = record.output_l - 1, mm = record.output_m - 1;
    const Complex m_li = std::polar(amplitudes(l, i), phases(l, i));
    const Complex m_mj = std::polar(amplitudes(mm, j), phases(mm, j));
    const Complex m_lj = std::polar(amplitudes(l, j), phases(l, j));
    const Complex m_mi = std::polar(amplitudes(mm, i), phases(mm, i));
    const double classical = std::norm(m_li * m_mj) + std::norm(m_lj * m_mi);
    const double quantum = std::norm(m_li * m_mj + m_lj * m_mi);
    if (!(classical > 0.0)) {
        throw NumericalError("visibility undefined for " + key_string(record.key()) +
                             ": distinguishable rate is zero");
    }
    return (classical - quantum) / classical;
}

TransferMatrix matrix_from_polar_grids(const RMatrix& amplitudes, const RMatrix& phases) {
    CMatrix entries(amplitudes.rows(), amplitudes.cols());
    for (int l = 0; l < amplitudes.rows(); ++l) {
        for (int i = 0; i < amplitudes.cols(); ++i) {
            entries(l, i) = std::polar(amplitudes(l, i), phases(l, i));
        }
    }
    return TransferMatrix(std::move(entries));
}

struct ResampledData {
    SinglesCounts counts;
    std::vector<VisibilityRecord> records;
};

ResampledData resample(const SinglesCounts& counts,
                       const std::vector<VisibilityRecord>& records, std::uint64_t seed) {
    auto gen = rng::engine(seed);
    ResampledData out{SinglesCounts(counts.outputs(), counts.inputs()), records};
    for (int l = 1; l <= counts.outputs(); ++l) {
        for (int i = 1; i <= counts.inputs(); ++i) {
            out.counts.set_count(l, i,
                                 rng::poisson(gen, static_cast<double>(counts.count(l, i))));
        }
    }
    for (VisibilityRecord& record : out.records) {
        const double dip = static_cast<double>(rng::poisson(gen, *record.dip_counts));
        const double baseline =
            static_cast<double>(rng::poisson(gen, *record.baseline_counts));
        if (!(baseline > 0.0)) {
            throw NumericalError("resampled baseline count is zero for " +
                                 key_string(record.key()));
        }
        record.dip_counts = dip;
        record.baseline_counts = baseline;
        record.value = (baseline - dip) / baseline;
    }
    return out;
}

}  // namespace

SinglesCounts::SinglesCounts(int outputs, int inputs)
    : outputs_(outputs), inputs_(inputs),
      counts_(static_cast<std::size_t>(outputs) * static_cast<std::size_t>(inputs), 0) {
    if (outputs < 1 || inputs < 1) {
        throw ValidationError("singles grid needs at least one output and one input");
    }
}

std::uint64_t SinglesCounts::count(int output, int input) const {
    if (output < 1 || output > outputs_ || input < 1 || input > inputs_) {
        throw ValidationError("singles index out of range");
    }
    return counts_[static_cast<std::size_t>(output - 1) * static_cast<std::size_t>(inputs_) +
                   static_cast<std::size_t>(input - 1)];
}

void SinglesCounts::set_count(int output, int input, std::uint64_t value) {
    if (output < 1 || output > outputs_ || input < 1 || input > inputs_) {
        throw ValidationError("singles index out of range");
    }
    counts_[static_cast<std::size_t>(output - 1) * static_cast<std::size_t>(inputs_) +
            static_cast<std::size_t>(input - 1)] = value;
}

void SinglesCounts::validate() const {
    for (int i = 1; i <= inputs_; ++i) {
        std::uint64_t total = 0;
        for (int l = 1; l <= outputs_; ++l) total += count(l, i);
        if (total == 0) {
            throw ValidationError("input column " + std::to_string(i) +
                                  " has no counts; amplitudes are undefined");
        }
    }
}

VisibilityRecord::VisibilityRecord(int i, int j, int l, int m, double v, double sig)
    : input_i(i), input_j(j), output_l(l), output_m(m), value(v), sigma(sig) {
    if (input_i > input_j) std::swap(input_i, input_j);
    if (output_l > output_m) std::swap(output_l, output_m);
    if (input_i == input_j || output_l == output_m || input_i < 1 || output_l < 1) {
        throw ValidationError("visibility record needs two distinct 1-based input and "
                              "output modes");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("visibility value must be finite");
    }
}

RMatrix amplitudes_from_singles(const SinglesCounts& counts) {
    counts.validate();
    RMatrix amplitudes(counts.outputs(), counts.inputs());
    for (int i = 1; i <= counts.inputs(); ++i) {
        double total = 0.0;
        for (int l = 1; l <= counts.outputs(); ++l) {
            total += static_cast<double>(counts.count(l, i));
        }
        for (int l = 1; l <= counts.outputs(); ++l) {
            amplitudes(l - 1, i - 1) = std::sqrt(static_cast<double>(counts.count(l, i)) / total);
        }
    }
    return amplitudes;
}

PhaseSolution phases_from_visibilities(const RMatrix& amplitudes,
                                       const std::vector<VisibilityRecord>& records) {
    const int m = static_cast<int>(amplitudes.rows());
    const int n = static_cast<int>(amplitudes.cols());
    if (m < 2 || n < 2) {
        throw ValidationError("phase recovery needs at least two modes on both sides");
    }
    const int free_phases = (m - 1) * (n - 1);
    if (free_phases > 16) {
        throw ValidationError("phase-sign search supports at most 16 free phases");
    }

    // Anchor records: input pair (1,i) observed at output pair (1,l).
    std::map<std::array<int, 4>, const VisibilityRecord*> by_key;
    for (const VisibilityRecord& record : records) by_key[record.key()] = &record;

    RMatrix magnitude(m, n);
    magnitude.setZero();
    for (int l = 2; l <= m; ++l) {
        for (int i = 2; i <= n; ++i) {
            const auto anchor = by_key.find({1, i, 1, l});
            if (anchor == by_key.end()) {
                throw ValidationError("missing visibility record " +
                                      key_string({1, i, 1, l}) +
                                      " needed to fix the phase of element (" +
                                      std::to_string(l) + "," + std::to_string(i) + ")");
            }
            const double a = amplitudes(0, 0);
            const double b = amplitudes(0, i - 1);
            const double c = amplitudes(l - 1, 0);
            const double d = amplitudes(l - 1, i - 1);
            if (a * b * c * d == 0.0) {
                throw NumericalError("phase of element (" + std::to_string(l) + "," +
                                     std::to_string(i) +
                                     ") is indeterminate: a singles amplitude is zero");
            }
            double cosine = -anchor->second->value * (a * a * d * d + b * b * c * c) /
                            (2.0 * a * b * c * d);
            if (std::abs(cosine) > 1.0 + kCosineSlack) {
                std::ostringstream msg;
                msg << "visibility " << key_string({1, i, 1, l})
                    << " is inconsistent with the singles amplitudes: |cos phi| = "
                    << std::abs(cosine);
                throw NumericalError(msg.str());
            }
            cosine = std::clamp(cosine, -1.0, 1.0);
            magnitude(l - 1, i - 1) = std::acos(cosine);
        }
    }

    // Exhaustive sign search, scored against every record (the anchors fix
    // only the cosines; the remaining records break the sign degeneracy).
    RMatrix phases(m, n);
    RMatrix best_phases(m, n);
    double best_residual = std::numeric_limits<double>::infinity();
    for (unsigned combo = 0; combo < (1u << free_phases); ++combo) {
        phases.setZero();
        int bit = 0;
        for (int l = 2; l <= m; ++l) {
            for (int i = 2; i <= n; ++i) {
                const double sign = (combo >> bit) & 1u ? -1.0 : 1.0;
                phases(l - 1, i - 1) = sign * magnitude(l - 1, i - 1);
                ++bit;
            }
        }
        double residual = 0.0;
        for (const VisibilityRecord& record : records) {
            const double diff = predicted_visibility(amplitudes, phases, record) - record.value;
            residual += diff * diff;
        }
        if (residual < best_residual - 1e-15) {
            best_residual = residual;
            best_phases = phases;
        }
    }

    // The data cannot distinguish the matrix from its conjugate; return the
    // branch whose first phase of nonvanishing magnitude is positive.
    for (int l = 2; l <= m; ++l) {
        bool decided = false;
        for (int i = 2; i <= n && !decided; ++i) {
            const double phi = best_phases(l - 1, i - 1);
            if (std::abs(std::sin(phi)) > 1e-9) {
                if (phi < 0.0) best_phases = -best_phases;
                decided = true;
            }
        }
        if (decided) break;
    }

    return PhaseSolution{best_phases, best_residual};
}

TomographyResult reconstruct(const SinglesCounts& counts,
                             const std::vector<VisibilityRecord>& records) {
    const RMatrix amplitudes = amplitudes_from_singles(counts);
    PhaseSolution solution = phases_from_visibilities(amplitudes, records);
    TomographyResult result{matrix_from_polar_grids(amplitudes, solution.phases),
                            RMatrix::Zero(counts.outputs(), counts.inputs()),
                            RMatrix::Zero(counts.outputs(), counts.inputs()),
                            0,
                            solution.residual};
    return result;
}

std::vector<VisibilityRecord> predict_visibilities(const TransferMatrix& m) {
    if (m.rows() < 2 || m.cols() < 2) {
        throw ValidationError("visibility prediction needs at least two modes on both sides");
    }
    std::vector<VisibilityRecord> records;
    for (int i = 1; i <= m.cols(); ++i) {
        for (int j = i + 1; j <= m.cols(); ++j) {
            for (int l = 1; l <= m.rows(); ++l) {
                for (int mm = l + 1; mm <= m.rows(); ++mm) {
                    const PhotonConfiguration input{i, j};
                    const PhotonConfiguration output{l, mm};
                    const double classical = rate_distinguishable(m, input, output);
                    if (!(classical > 0.0)) {
                        throw NumericalError("visibility undefined for " +
                                             key_string({i, j, l, mm}) +
                                             ": distinguishable rate is zero");
                    }
                    const double quantum = rate_indistinguishable(m, input, output);
                    records.emplace_back(i, j, l, mm, (classical - quantum) / classical);
                }
            }
        }
    }
    return records;
}

double q_vis(const std::vector<VisibilityRecord>& measured,
             const std::vector<VisibilityRecord>& predicted) {
    if (measured.empty()) {
        throw ValidationError("q_vis needs at least one record");
    }
    std::map<std::array<int, 4>, double> predicted_by_key;
    for (const VisibilityRecord& record : predicted) {
        predicted_by_key[record.key()] = record.value;
    }
    if (predicted_by_key.size() != measured.size() ||
        predicted.size() != measured.size()) {
        throw ValidationError("q_vis needs identical key sets");
    }
    double sum = 0.0;
    for (const VisibilityRecord& record : measured) {
        const auto match = predicted_by_key.find(record.key());
        if (match == predicted_by_key.end()) {
            throw ValidationError("q_vis pairing failure: no predicted record for " +
                                  key_string(record.key()));
        }
        sum += std::abs(record.value - match->second);
    }
    return sum / static_cast<double>(measured.size());
}

TomographyResult monte_carlo(const SinglesCounts& counts,
                             const std::vector<VisibilityRecord>& records,
                             const MonteCarloOptions& options) {
    if (options.resamples < 2) {
        throw ValidationError("Monte Carlo needs at least 2 resamples");
    }
    for (const VisibilityRecord& record : records) {
        if (!record.dip_counts || !record.baseline_counts) {
            throw ValidationError("record " + key_string(record.key()) +
                                  " carries no raw counts; Poisson resampling needs "
                                  "both C(0) and C(inf)");
        }
    }

    TomographyResult point = reconstruct(counts, records);
    const int m = counts.outputs();
    const int n = counts.inputs();
    RMatrix point_phases(m, n);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < n; ++i) {
            point_phases(l, i) = std::arg(point.matrix.entries()(l, i));
        }
    }

    const int resamples = options.resamples;
    std::vector<RMatrix> amplitude_draws(static_cast<std::size_t>(resamples));
    std::vector<RMatrix> phase_draws(static_cast<std::size_t>(resamples));
    std::vector<char> failed(static_cast<std::size_t>(resamples), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads(options.threads))
#endif
    for (int r = 0; r < resamples; ++r) {
        try {
            const ResampledData draw =
                resample(counts, records, rng::substream_seed(options.seed,
                                                              static_cast<std::uint64_t>(r)));
            const TomographyResult redo = reconstruct(draw.counts, draw.records);
            RMatrix amp(m, n), ph(m, n);
            for (int l = 0; l < m; ++l) {
                for (int i = 0; i < n; ++i) {
                    amp(l, i) = std::abs(redo.matrix.entries()(l, i));
                    ph(l, i) = std::arg(redo.matrix.entries()(l, i));
                }
            }
            amplitude_draws[static_cast<std::size_t>(r)] = std::move(amp);
            phase_draws[static_cast<std::size_t>(r)] = std::move(ph);
        } catch (const Error&) {
            failed[static_cast<std::size_t>(r)] = 1;
        }
    }

    std::vector<int> kept;
    for (int r = 0; r < resamples; ++r) {
        if (!failed[static_cast<std::size_t>(r)]) kept.push_back(r);
    }
    const int failures = resamples - static_cast<int>(kept.size());
    if (failures * 10 > resamples) {
        throw NumericalError("Monte Carlo unstable: " + std::to_string(failures) + " of " +
                             std::to_string(resamples) + " reconstructions failed");
    }
    if (kept.size() < 2) {
        throw NumericalError("Monte Carlo needs at least 2 successful resamples");
    }

    // Phase deviations live on the circle; each draw is aligned to the point
    // estimate, picking the conjugate branch when that sits closer.
    std::vector<RMatrix> phase_deviation(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const RMatrix& draw = phase_draws[static_cast<std::size_t>(kept[k])];
        RMatrix direct(m, n), conjugated(m, n);
        double direct_cost = 0.0, conjugate_cost = 0.0;
        for (int l = 0; l < m; ++l) {
            for (int i = 0; i < n; ++i) {
                direct(l, i) = wrap_angle(draw(l, i) - point_phases(l, i));
                conjugated(l, i) = wrap_angle(-draw(l, i) - point_phases(l, i));
                direct_cost += direct(l, i) * direct(l, i);
                conjugate_cost += conjugated(l, i) * conjugated(l, i);
            }
        }
        phase_deviation[k] = direct_cost <= conjugate_cost ? direct : conjugated;
    }

    RMatrix amplitude_sigma = RMatrix::Zero(m, n);
    RMatrix phase_sigma = RMatrix::Zero(m, n);
    const double denom = static_cast<double>(kept.size() - 1);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < n; ++i) {
            double amp_mean = 0.0;
            for (std::size_t k = 0; k < kept.size(); ++k) {
                amp_mean += amplitude_draws[static_cast<std::size_t>(kept[k])](l, i);
            }
            amp_mean /= static_cast<double>(kept.size());

            double amp_var = 0.0, phase_var = 0.0, phase_mean = 0.0;
            for (std::size_t k = 0; k < kept.size(); ++k) {
                const double da =
                    amplitude_draws[static_cast<std::size_t>(kept[k])](l, i) - amp_mean;
                amp_var += da * da;
                phase_mean += phase_deviation[k](l, i);
            }
            phase_mean /= static_cast<double>(kept.size());
            for (std::size_t k = 0; k < kept.size(); ++k) {
                const double dp = phase_deviation[k](l, i) - phase_mean;
                phase_var += dp * dp;
            }
            amplitude_sigma(l, i) = std::sqrt(amp_var / denom);
            phase_sigma(l, i) = std::sqrt(phase_var / denom);
        }
    }

    point.amplitude_sigma = amplitude_sigma;
    point.phase_sigma = phase_sigma;
    point.resample_count = static_cast<int>(kept.size());
    return point;
}

}  // namespace triphoton
