#include "beamdecay/operators.hpp"

#include <cmath>
#include <numbers>

#include "beamdecay/error.hpp"

namespace beamdecay {

BandedOperator::BandedOperator(const Grid& grid)
    : n_(grid.interior_size()), h_(grid.spacing()) {}

int BandedOperator::stencil_weight(std::size_t i, std::size_t j) const noexcept {
  if (i >= n_ || j >= n_) return 0;
  const auto d = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
  switch (d) {
    case 0:
      return (i == 0 || i + 1 == n_) ? 5 : 6;
    case 1:
    case -1:
      return -4;
    case 2:
    case -2:
      return 1;
    default:
      return 0;
  }
}

double BandedOperator::entry(std::size_t i, std::size_t j) const noexcept {
  const double h2 = h_ * h_;
  return static_cast<double>(stencil_weight(i, j)) / (h2 * h2);
}

double BandedOperator::quadratic_form(std::span<const double> u) const {
  const Vector lu = second_difference(u);
  return inner_product(lu, lu, h_);
}

BandedOperator assemble_biharmonic(const Grid& grid) { return BandedOperator(grid); }

Vector apply(const BandedOperator& op, std::span<const double> u) { return op.apply(u); }

double inner_product(std::span<const double> u, std::span<const double> w, double h) {
  if (u.size() != w.size()) throw Error("inner_product: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * w[i];
  return h * acc;
}

FieldNorms norms(std::span<const double> u, const Grid& grid, const BandedOperator& op,
                 double m) {
  if (m < 1.0) throw Error("norms: lm requires m >= 1");
  if (u.size() != grid.interior_size() || u.size() != op.size()) {
    throw Error("norms: length mismatch");
  }
  const double h = grid.spacing();
  FieldNorms out;
  double sum_sq = 0.0;
  double sum_m = 0.0;
  for (double x : u) {
    if (!std::isfinite(x)) throw Error("norms: non-finite entry");
    sum_sq += x * x;
    sum_m += std::pow(std::abs(x), m);
    out.sup = std::max(out.sup, std::abs(x));
  }
  out.l2 = std::sqrt(h * sum_sq);
  out.h2star = std::sqrt(op.quadratic_form(u));
  out.lm = std::pow(h * sum_m, 1.0 / m);
  return out;
}

namespace {

Vector sine_sum(std::span<const double> in, double weight) {
  const std::size_t n = in.size();
  const double cells = static_cast<double>(n + 1);
  Vector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // (k+1)(i+1) mod 2(n+1) keeps the sine argument in [0, 2 pi).
      const auto idx = ((k + 1) * (i + 1)) % (2 * (n + 1));
      acc += in[i] * std::sin(std::numbers::pi * static_cast<double>(idx) / cells);
    }
    out[k] = weight * acc;
  }
  return out;
}

}  // namespace

Vector dst(std::span<const double> u) {
  return sine_sum(u, 2.0 / static_cast<double>(u.size() + 1));
}

Vector idst(std::span<const double> coefficients) { return sine_sum(coefficients, 1.0); }

double second_difference_eigenvalue(const Grid& grid, int k) {
  const double h = grid.spacing();
  const double s = std::sin(static_cast<double>(k) * std::numbers::pi * h / (2.0 * grid.length()));
  return 4.0 * s * s / (h * h);
}

double biharmonic_eigenvalue(const Grid& grid, int k) {
  const double lambda = second_difference_eigenvalue(grid, k);
  return lambda * lambda;
}

DiscreteConstants discrete_constants(const Grid& grid) {
  const double lambda1 = second_difference_eigenvalue(grid, 1);
  DiscreteConstants out;
  out.B = 1.0 / lambda1;
  out.mu1 = lambda1 * lambda1;
  out.k_inf = 0.5 * std::sqrt(grid.length()) * std::sqrt(out.B);
  return out;
}

}  // namespace beamdecay
