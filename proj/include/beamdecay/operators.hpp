#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beamdecay/banded.hpp"
#include "beamdecay/grid.hpp"

namespace beamdecay {

/// Discrete u_xxxx on the interior nodes with hinged ends.
///
/// Interior rows carry (1, -4, 6, -4, 1) / h^4. The ghost reflection
/// u_{-1} = -u_1 (from u = u_xx = 0 at the wall) turns the first and last
/// rows into (5, -4, 1) / h^4. The matrix equals Lambda^2 where Lambda is the
/// Dirichlet second difference (-1, 2, -1) / h^2, so it is symmetric positive
/// definite with eigenvectors sin(k pi (x - c) / L).
class BandedOperator {
 public:
  explicit BandedOperator(const Grid& grid);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }

  /// Matrix entry (i, j); zero outside the band.
  double entry(std::size_t i, std::size_t j) const noexcept;

  /// Integer stencil weight of entry (i, j), i.e. entry * h^4.
  int stencil_weight(std::size_t i, std::size_t j) const noexcept;

  /// A u. Throws Error on length mismatch.
  template <class T>
  std::vector<T> apply(std::span<const T> u) const;

  /// Lambda u with Lambda the Dirichlet second difference; A = Lambda^2.
  template <class T>
  std::vector<T> second_difference(std::span<const T> u) const;

  /// (A u, u)_h, evaluated as ||Lambda u||_h^2 to avoid the h^-4 cancellation.
  double quadratic_form(std::span<const double> u) const;

  /// scale * A as a banded matrix.
  template <class T>
  BandedMatrix<T> to_banded(T scale = T(1)) const;

 private:
  std::size_t n_;
  double h_;
};

BandedOperator assemble_biharmonic(const Grid& grid);

/// A u. Throws Error on length mismatch.
Vector apply(const BandedOperator& op, std::span<const double> u);

/// (u, w)_h = h * sum u_i w_i.
double inner_product(std::span<const double> u, std::span<const double> w, double h);

struct FieldNorms {
  double l2 = 0.0;
  double h2star = 0.0;
  double sup = 0.0;
  double lm = 0.0;
};

/// l2 = sqrt((u,u)_h), h2star = sqrt((Au,u)_h), sup = max |u_i|,
/// lm = (h sum |u_i|^m)^(1/m). Throws Error for m < 1 or non-finite entries.
FieldNorms norms(std::span<const double> u, const Grid& grid, const BandedOperator& op,
                 double m = 2.0);

/// Sine coefficients b_k, k = 1..N-1, with u_i = sum_k b_k sin(k pi i / N).
Vector dst(std::span<const double> u);
/// Inverse of dst.
Vector idst(std::span<const double> coefficients);

/// 4 sin^2(k pi h / (2 L)) / h^2: eigenvalue k of the second difference.
double second_difference_eigenvalue(const Grid& grid, int k);
/// Square of the above: eigenvalue k of the biharmonic operator.
double biharmonic_eigenvalue(const Grid& grid, int k);

struct DiscreteConstants {
  double B = 0.0;      ///< Poincare: ||u||_2 <= B ||u||_{H2*}
  double k_inf = 0.0;  ///< embedding: ||u||_inf <= k_inf ||u||_{H2*}
  double mu1 = 0.0;    ///< smallest biharmonic eigenvalue
};

/// B = 1 / lambda_1, mu1 = lambda_1^2, k_inf = (sqrt(L) / 2) sqrt(B).
DiscreteConstants discrete_constants(const Grid& grid);

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> BandedOperator::second_difference(std::span<const T> u) const {
  if (u.size() != n_) throw Error("second_difference: length mismatch");
  const T inv_h2 = T(1) / (T(h_) * T(h_));
  std::vector<T> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const T left = i > 0 ? u[i - 1] : T(0);
    const T right = i + 1 < n_ ? u[i + 1] : T(0);
    out[i] = (T(2) * u[i] - left - right) * inv_h2;
  }
  return out;
}

template <class T>
std::vector<T> BandedOperator::apply(std::span<const T> u) const {
  if (u.size() != n_) throw Error("apply: length mismatch");
  const std::vector<T> lu = second_difference(u);
  return second_difference(std::span<const T>(lu));
}

template <class T>
BandedMatrix<T> BandedOperator::to_banded(T scale) const {
  BandedMatrix<T> m(n_);
  const T inv_h = T(1) / T(h_);
  const T inv_h4 = inv_h * inv_h * inv_h * inv_h;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(n_ - 1, i + 2);
    for (std::size_t j = lo; j <= hi; ++j) m(i, j) = scale * T(stencil_weight(i, j)) * inv_h4;
  }
  return m;
}

}  // namespace beamdecay
