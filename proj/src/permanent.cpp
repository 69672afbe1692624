#include "triphoton/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace triphoton {

namespace {

void check_square(const CMatrix& matrix, int max_order) {
    if (matrix.rows() != matrix.cols()) {
        throw ValidationError("permanent needs a square matrix, got " +
                              std::to_string(matrix.rows()) + "x" +
                              std::to_string(matrix.cols()));
    }
    if (matrix.rows() > max_order) {
        throw ValidationError("matrix order " + std::to_string(matrix.rows()) +
                              " exceeds the permanent size limit " +
                              std::to_string(max_order));
    }
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Sum of the Ryser terms for the subset indices [first, last).  Subsets are
// visited in Gray-code order; the row sums are seeded from gray(first).
Complex ryser_range(const CMatrix& m, std::uint64_t first, std::uint64_t last) {
    const int n = static_cast<int>(m.rows());
    std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex(0.0, 0.0));

    std::uint64_t gray = first ^ (first >> 1);
    for (int j = 0; j < n; ++j) {
        if (gray & (std::uint64_t{1} << j)) {
            for (int i = 0; i < n; ++i) row_sums[i] += m(i, j);
        }
    }

    Complex total(0.0, 0.0);
    for (std::uint64_t index = first; index < last; ++index) {
        const std::uint64_t next_gray = index ^ (index >> 1);
        const std::uint64_t changed = next_gray ^ gray;
        if (changed != 0) {
            const int j = std::countr_zero(changed);
            const double direction = (next_gray & changed) ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) row_sums[i] += direction * m(i, j);
            gray = next_gray;
        }
        Complex product(1.0, 0.0);
        for (int i = 0; i < n; ++i) product *= row_sums[i];
        total += (std::popcount(gray) & 1) ? -product : product;
    }
    return total;
}

}  // namespace

Complex permanent_naive(const CMatrix& matrix) {
    check_square(matrix, 8);
    const int n = static_cast<int>(matrix.rows());
    if (n == 1) return matrix(0, 0);

    std::vector<int> column(static_cast<std::size_t>(n));
    std::iota(column.begin(), column.end(), 0);

    Complex total(0.0, 0.0);
    do {
        Complex term(1.0, 0.0);
        for (int i = 0; i < n; ++i) term *= matrix(i, column[static_cast<std::size_t>(i)]);
        total += term;
    } while (std::next_permutation(column.begin(), column.end()));
    return total;
}

namespace detail {

Complex ryser_serial(const CMatrix& matrix) {
    const int n = static_cast<int>(matrix.rows());
    const std::uint64_t subsets = std::uint64_t{1} << n;
    const Complex sum = ryser_range(matrix, 1, subsets);
    return (n & 1) ? -sum : sum;
}

Complex ryser_chunked(const CMatrix& matrix, int chunks, int threads) {
    const int n = static_cast<int>(matrix.rows());
    const std::uint64_t subsets = std::uint64_t{1} << n;
    const std::uint64_t span = subsets - 1;  // index 0 is the empty set
    chunks = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(chunks), span));
    std::vector<Complex> partial(static_cast<std::size_t>(chunks));

    // The chunk grid is fixed by `chunks` alone, and the partial sums are
    // reduced in chunk order, so the result is identical for any thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
#endif
    for (int c = 0; c < chunks; ++c) {
        const std::uint64_t first = 1 + span * static_cast<std::uint64_t>(c) / chunks;
        const std::uint64_t last = 1 + span * (static_cast<std::uint64_t>(c) + 1) / chunks;
        partial[static_cast<std::size_t>(c)] = ryser_range(matrix, first, last);
    }
#ifndef _OPENMP
    (void)threads;
#endif

    Complex sum(0.0, 0.0);
    for (const Complex& p : partial) sum += p;
    return (n & 1) ? -sum : sum;
}

}  // namespace detail

Complex permanent_ryser(const CMatrix& matrix, int threads) {
    check_square(matrix, 30);
    const int n = static_cast<int>(matrix.rows());
    if (n < 20) return detail::ryser_serial(matrix);
    return detail::ryser_chunked(matrix, 256, threads);
}

}  // namespace triphoton
