#pragma once

#include "triphoton/types.hpp"

namespace triphoton {

/// Permanent by direct permutation sum, O(k! k).  Serial reference used as
/// the oracle for the Ryser implementations.  Limited to k <= 8.
Complex permanent_naive(const CMatrix& matrix);

/// Permanent by Ryser's inclusion-exclusion formula with Gray-code updates,
/// O(2^k k).  Limited to k <= 30.  Dispatches to the chunked OpenMP kernel
/// for large k; the result is independent of the thread count.
Complex permanent_ryser(const CMatrix& matrix, int threads = 0);

namespace detail {

/// Single-pass Gray-code Ryser sum.
Complex ryser_serial(const CMatrix& matrix);

/// Ryser sum split into fixed chunks of the subset range; chunk partial sums
/// are accumulated in chunk order, so results do not depend on the schedule.
Complex ryser_chunked(const CMatrix& matrix, int chunks, int threads);

}  // namespace detail

}  // namespace triphoton
