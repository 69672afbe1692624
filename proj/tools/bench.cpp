// Timing comparison between the serial reference kernels and the
// OpenMP-parallel paths.  --quick shrinks the workload so the binary can run
// as a smoke test.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include "triphoton/design_eval.hpp"
#include "triphoton/distinguishability.hpp"
#include "triphoton/linear_optics.hpp"
#include "triphoton/permanent.hpp"
#include "triphoton/tomography.hpp"
#include "triphoton/types.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace triphoton;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

CMatrix random_matrix(int order, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix matrix(order, order);
    for (int r = 0; r < order; ++r) {
        for (int c = 0; c < order; ++c) {
            matrix(r, c) = Complex(normal(gen), normal(gen));
        }
    }
    return matrix;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void bench_permanent(bool quick) {
    std::mt19937_64 gen(12345);
    const int order = quick ? 14 : 22;
    const int repeats = quick ? 3 : 1;
    const CMatrix matrix = random_matrix(order, gen);

    auto start = std::chrono::steady_clock::now();
    Complex serial;
    for (int r = 0; r < repeats; ++r) serial = detail::ryser_serial(matrix);
    const double serial_s = seconds_since(start) / repeats;

    start = std::chrono::steady_clock::now();
    Complex parallel;
    for (int r = 0; r < repeats; ++r) {
        parallel = detail::ryser_chunked(matrix, 256, max_threads());
    }
    const double parallel_s = seconds_since(start) / repeats;

    const double diff = std::abs(serial - parallel) / std::abs(serial);
    std::printf("permanent  k=%-2d        serial %8.4fs  parallel(%d) %8.4fs  "
                "speedup %5.2fx  |rel diff| %.2e\n",
                order, serial_s, max_threads(), parallel_s, serial_s / parallel_s, diff);
}

void bench_curves(bool quick) {
    const TransferMatrix m = example_lossy_tritter();
    std::vector<double> delays;
    const int samples = quick ? 201 : 4001;
    for (int k = 0; k < samples; ++k) delays.push_back(-10.0 + 20.0 * k / (samples - 1));

    auto start = std::chrono::steady_clock::now();
    const DelayScan serial = threefold_curve(m, {1, 2, 3}, {1, 2, 3}, 1, delays, 1.5, 1);
    const double serial_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const DelayScan parallel =
        threefold_curve(m, {1, 2, 3}, {1, 2, 3}, 1, delays, 1.5, max_threads());
    const double parallel_s = seconds_since(start);

    double diff = 0.0;
    for (std::size_t k = 0; k < serial.samples.size(); ++k) {
        diff = std::max(diff, std::abs(serial.samples[k].second -
                                       parallel.samples[k].second));
    }
    std::printf("threefold  %-5d samples serial %8.4fs  parallel(%d) %8.4fs  "
                "speedup %5.2fx  max |diff| %.2e\n",
                samples, serial_s, max_threads(), parallel_s, serial_s / parallel_s, diff);
}

void bench_monte_carlo(bool quick) {
    const TransferMatrix truth = example_lossy_tritter();
    SinglesCounts singles(3, 3);
    std::vector<VisibilityRecord> records;
    const double level = 1e6;
    for (int l = 1; l <= 3; ++l) {
        for (int i = 1; i <= 3; ++i) {
            singles.set_count(
                l, i,
                static_cast<std::uint64_t>(level * std::norm(truth.at_modes(l, i))));
        }
    }
    for (int i = 1; i <= 3; ++i) {
        for (int j = i + 1; j <= 3; ++j) {
            for (int l = 1; l <= 3; ++l) {
                for (int mm = l + 1; mm <= 3; ++mm) {
                    const PhotonConfiguration in{i, j}, out{l, mm};
                    const double cinf = level * rate_distinguishable(truth, in, out);
                    const double c0 = level * rate_indistinguishable(truth, in, out);
                    VisibilityRecord record(i, j, l, mm, (cinf - c0) / cinf);
                    record.dip_counts = c0;
                    record.baseline_counts = cinf;
                    records.push_back(record);
                }
            }
        }
    }

    const int resamples = quick ? 100 : 800;
    MonteCarloOptions serial_options{resamples, 7, 1};
    auto start = std::chrono::steady_clock::now();
    const TomographyResult serial = monte_carlo(singles, records, serial_options);
    const double serial_s = seconds_since(start);

    MonteCarloOptions parallel_options{resamples, 7, max_threads()};
    start = std::chrono::steady_clock::now();
    const TomographyResult parallel = monte_carlo(singles, records, parallel_options);
    const double parallel_s = seconds_since(start);

    const double diff = (serial.amplitude_sigma - parallel.amplitude_sigma)
                            .cwiseAbs()
                            .maxCoeff();
    std::printf("montecarlo %-5d draws   serial %8.4fs  parallel(%d) %8.4fs  "
                "speedup %5.2fx  max |diff| %.2e\n",
                resamples, serial_s, max_threads(), parallel_s, serial_s / parallel_s,
                diff);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--quick") == 0) quick = true;
    }
    std::printf("threads available: %d%s\n", max_threads(), quick ? "  (quick mode)" : "");
    bench_permanent(quick);
    bench_curves(quick);
    bench_monte_carlo(quick);
    return 0;
}
