#pragma once

// Pentadiagonal matrices and their LU solve.
//
// Storage keeps, for row i, columns i-2 .. i+4: the two extra superdiagonals
// absorb fill-in from row interchanges during partial pivoting, which never
// reach further than two rows below the pivot.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "beamdecay/error.hpp"

namespace beamdecay {

template <class T>
class BandedMatrix {
 public:
  static constexpr std::ptrdiff_t kLower = 2;
  static constexpr std::ptrdiff_t kUpper = 2;
  static constexpr std::ptrdiff_t kWidth = kLower + kUpper + kLower + 1;

  BandedMatrix() = default;
  explicit BandedMatrix(std::size_t n) : n_(n), data_(n * kWidth, T(0)) {}

  static BandedMatrix identity(std::size_t n) {
    BandedMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  /// True when (i, j) lies inside the pentadiagonal pattern.
  static bool in_band(std::size_t i, std::size_t j) noexcept {
    const auto d = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
    return d >= -kLower && d <= kUpper;
  }

  T& operator()(std::size_t i, std::size_t j) { return data_[slot(i, j)]; }
  T operator()(std::size_t i, std::size_t j) const {
    const auto d = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
    if (d < -kLower || d > kUpper + kLower) return T(0);
    return data_[slot(i, j)];
  }

  /// y = M x over the pentadiagonal pattern.
  std::vector<T> multiply(std::span<const T> x) const {
    if (x.size() != n_) throw Error("BandedMatrix::multiply: length mismatch");
    std::vector<T> y(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t lo = i >= 2 ? i - 2 : 0;
      const std::size_t hi = std::min(n_ - 1, i + 2);
      T acc(0);
      for (std::size_t j = lo; j <= hi; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  T max_abs() const {
    T out(0);
    for (const T& v : data_) out = std::max(out, T(std::abs(v)));
    return out;
  }

 private:
  template <class U>
  friend std::vector<U> banded_solve(BandedMatrix<U> matrix, std::span<const U> rhs);

  std::size_t slot(std::size_t i, std::size_t j) const noexcept {
    return i * kWidth + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) -
                                                 static_cast<std::ptrdiff_t>(i) + kLower);
  }

  std::size_t n_ = 0;
  std::vector<T> data_;
};

/// Solves M x = rhs by Gaussian elimination with partial pivoting restricted
/// to the band. Throws SolverError on a numerically singular pivot.
template <class T>
std::vector<T> banded_solve(BandedMatrix<T> matrix, std::span<const T> rhs) {
  using M = BandedMatrix<T>;
  const std::size_t n = matrix.size();
  if (rhs.size() != n) throw Error("banded_solve: length mismatch");
  std::vector<T> x(rhs.begin(), rhs.end());
  if (n == 0) return x;

  const T scale = matrix.max_abs();
  const T tiny = T(n) * std::numeric_limits<T>::epsilon() * scale;
  if (!(scale > T(0))) throw SolverError("banded_solve: zero matrix");

  auto at = [&](std::size_t i, std::size_t j) -> T& { return matrix.data_[matrix.slot(i, j)]; };

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + static_cast<std::size_t>(M::kLower));
    std::size_t pivot = k;
    T best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const T cand = std::abs(at(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (!(best > tiny)) {
      throw SolverError("banded_solve: numerically singular pivot at row " + std::to_string(k));
    }
    const std::size_t last_col = std::min(n - 1, k + static_cast<std::size_t>(M::kUpper + M::kLower));
    if (pivot != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(pivot, j));
      std::swap(x[k], x[pivot]);
    }
    const T diag = at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const T factor = at(i, k) / diag;
      if (factor == T(0)) continue;
      at(i, k) = T(0);
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= factor * at(k, j);
      x[i] -= factor * x[k];
    }
  }

  for (std::size_t kk = n; kk-- > 0;) {
    const std::size_t last_col = std::min(n - 1, kk + static_cast<std::size_t>(M::kUpper + M::kLower));
    T acc = x[kk];
    for (std::size_t j = kk + 1; j <= last_col; ++j) acc -= at(kk, j) * x[j];
    x[kk] = acc / at(kk, kk);
  }
  return x;
}

}  // namespace beamdecay
