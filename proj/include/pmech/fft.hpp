#pragma once

#include <span>

#include "pmech/rational.hpp"

namespace pmech::fft {

/// Sign of the exponent: Forward computes sum_j f_j e^{-2 pi i jk/N}, Backward e^{+...}.
/// Transforms are unnormalised and in place.
enum class Direction { Forward = -1, Backward = +1 };

void transform_1d(std::span<Complex> data, Direction dir);

/// Transforms every row (contiguous, length `cols`) of a row-major rows x cols array.
void transform_rows(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir);

/// Transforms every column (stride `cols`) of a row-major rows x cols array.
void transform_cols(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir);

void transform_2d(std::span<Complex> data, std::size_t rows, std::size_t cols, Direction dir);

/// Signed frequency index of DFT bin m for length N: m for m < N/2, m - N otherwise.
inline long signed_bin(std::size_t m, std::size_t n) {
  return m < (n + 1) / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

}  // namespace pmech::fft
