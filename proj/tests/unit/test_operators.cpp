#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "beamdecay/banded.hpp"
#include "beamdecay/error.hpp"
#include "beamdecay/operators.hpp"

using namespace beamdecay;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

// Dense oracle: A = D^2 with D the Dirichlet second difference, built
// independently of the library's stencil tables.
Eigen::MatrixXd dense_biharmonic(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.interior_size());
  const double h = g.spacing();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 2.0 / (h * h);
    if (i > 0) D(i, i - 1) = -1.0 / (h * h);
    if (i + 1 < n) D(i, i + 1) = -1.0 / (h * h);
  }
  return D * D;
}

Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("stencil rows with hinged ghost reflection") {
  const Grid g(BeamDomain{0.0, 1.0}, 10);
  const BandedOperator op(g);
  const std::size_t n = op.size();
  CHECK(op.stencil_weight(0, 0) == 5);
  CHECK(op.stencil_weight(0, 1) == -4);
  CHECK(op.stencil_weight(0, 2) == 1);
  CHECK(op.stencil_weight(n - 1, n - 1) == 5);
  CHECK(op.stencil_weight(n - 1, n - 2) == -4);
  const int interior[5] = {1, -4, 6, -4, 1};
  for (int d = -2; d <= 2; ++d) CHECK(op.stencil_weight(4, 4 + d) == interior[d + 2]);
  CHECK(op.stencil_weight(4, 7) == 0);

  const Eigen::MatrixXd A = dense_biharmonic(g);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(op.entry(i, j) == Approx(A(i, j)).epsilon(1e-13));
    }
  }
}

TEST_CASE("N = 4 on (0, pi): first mode eigenvalue against a dense eigen-solve") {
  const Grid g(BeamDomain{0.0, kPi}, 4);
  const BandedOperator op(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_biharmonic(g));
  const double lambda1 = second_difference_eigenvalue(g, 1);
  CHECK(biharmonic_eigenvalue(g, 1) == Approx(es.eigenvalues()(0)).epsilon(1e-13));
  // Frozen from the dense solve: lambda_1 = 0.94964..., mu_1 = 0.90181...
  CHECK(lambda1 == Approx(0.9496412).epsilon(1e-6));
  CHECK(biharmonic_eigenvalue(g, 1) == Approx(0.9018187).epsilon(1e-6));
  // Four-digit reference figures.
  CHECK(lambda1 == Approx(0.94966).epsilon(1e-4));
  CHECK(biharmonic_eigenvalue(g, 1) == Approx(0.90185).epsilon(1e-4));

  const Vector s = g.sine_mode(1);
  const Vector As = beamdecay::apply(op, s);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(As[i] == Approx(lambda1 * lambda1 * s[i]).epsilon(1e-13));

  const DiscreteConstants k = discrete_constants(g);
  CHECK(k.B == Approx(1.0 / std::sqrt(es.eigenvalues()(0))).epsilon(1e-12));
  CHECK(k.B == Approx(1.05301).epsilon(1e-4));
}

TEST_CASE("applying to zero gives zero") {
  for (int N : {4, 7, 64}) {
    const Grid g(BeamDomain{-1.0, 2.0}, N);
    const Vector z(g.interior_size(), 0.0);
    for (double x : beamdecay::apply(BandedOperator(g), z)) CHECK(x == 0.0);
    const FieldNorms nz = norms(z, g, BandedOperator(g), 3.0);
    CHECK(nz.l2 == 0.0);
    CHECK(nz.h2star == 0.0);
    CHECK(nz.sup == 0.0);
    CHECK(nz.lm == 0.0);
  }
}

TEST_CASE("N = 64 on (0, pi): smallest eigenvalue close to the continuum value 1") {
  const Grid g(BeamDomain{0.0, kPi}, 64);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_biharmonic(g));
  CHECK(std::abs(es.eigenvalues()(0) - 1.0) < 2e-3);
  // Dense eigenvalues are accurate to about eps * ||A|| ~ 6e-10 here.
  CHECK(std::abs(biharmonic_eigenvalue(g, 1) - es.eigenvalues()(0)) < 1e-8);
}

TEST_CASE("every sine mode is an eigenvector with the closed-form eigenvalue") {
  const Grid g(BeamDomain{0.5, 2.0}, 24);
  const BandedOperator op(g);
  for (int k = 1; k < 24; ++k) {
    const Vector s = g.sine_mode(k);
    const Vector As = beamdecay::apply(op, s);
    const double mu = biharmonic_eigenvalue(g, k);
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(As[i] - mu * s[i]));
    CHECK(err <= 1e-11 * mu);
  }
}

TEST_CASE("operator is symmetric on random vectors") {
  std::mt19937_64 rng(7);
  const Grid g(BeamDomain{0.0, kPi}, 64);
  const BandedOperator op(g);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = random_vector(op.size(), rng);
    const Vector w = random_vector(op.size(), rng);
    const double a = inner_product(beamdecay::apply(op, u), w, g.spacing());
    const double b = inner_product(u, beamdecay::apply(op, w), g.spacing());
    CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)));
    // Quadratic form identity (Au, u) = ||Lambda u||^2.
    const double q = inner_product(beamdecay::apply(op, u), u, g.spacing());
    CHECK(op.quadratic_form(u) == Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("norms of the first sine mode on (0, pi)") {
  const Grid g(BeamDomain{0.0, kPi}, 64);
  const BandedOperator op(g);
  const Vector s = g.sine_mode(1);
  const FieldNorms n2 = norms(s, g, op);
  CHECK(std::abs(n2.l2 - std::sqrt(kPi / 2.0)) < 1e-3);
  CHECK(n2.h2star == Approx(second_difference_eigenvalue(g, 1) * n2.l2).epsilon(1e-12));
  CHECK(n2.sup == Approx(1.0).epsilon(1e-12));
  CHECK(n2.lm == Approx(n2.l2).epsilon(1e-14));
  CHECK_THROWS_AS(norms(s, g, op, 0.5), Error);
}

TEST_CASE("sine transform picks out modal coefficients") {
  const Grid g(BeamDomain{0.0, kPi}, 64);
  const Vector b1 = dst(g.sine_mode(1));
  CHECK(b1[0] == Approx(1.0).epsilon(1e-13));
  for (std::size_t k = 1; k < b1.size(); ++k) CHECK(std::abs(b1[k]) < 1e-13);

  Vector u(g.interior_size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g.node(i);
    u[i] = std::sin(2.0 * x) + 0.5 * std::sin(3.0 * x);
  }
  const Vector b = dst(u);
  CHECK(std::abs(b[0]) < 1e-13);
  CHECK(b[1] == Approx(1.0).epsilon(1e-13));
  CHECK(b[2] == Approx(0.5).epsilon(1e-13));
  for (std::size_t k = 3; k < b.size(); ++k) CHECK(std::abs(b[k]) < 1e-13);

  std::mt19937_64 rng(3);
  const Vector r = random_vector(u.size(), rng);
  const Vector back = idst(dst(r));
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(back[i] == Approx(r[i]).epsilon(1e-12));
}

TEST_CASE("discrete constants approach their continuum values") {
  CHECK(discrete_constants(Grid(BeamDomain{0.0, kPi}, 4096)).B == Approx(1.0).epsilon(1e-6));
  CHECK(discrete_constants(Grid(BeamDomain{0.0, 2.0 * kPi}, 4096)).B == Approx(4.0).epsilon(1e-6));
  const Grid g(BeamDomain{0.0, kPi}, 64);
  const DiscreteConstants k = discrete_constants(g);
  CHECK(k.mu1 == Approx(biharmonic_eigenvalue(g, 1)).epsilon(1e-15));
  CHECK(k.k_inf == Approx(std::sqrt(kPi) / 2.0 * std::sqrt(k.B)).epsilon(1e-15));
}

TEST_CASE("embedding ||u||_inf <= k_inf ||u||_H2* holds on random fields") {
  std::mt19937_64 rng(11);
  for (int N : {8, 33, 64}) {
    const Grid g(BeamDomain{0.0, 3.0}, N);
    const BandedOperator op(g);
    const DiscreteConstants k = discrete_constants(g);
    for (int trial = 0; trial < 50; ++trial) {
      Vector u = random_vector(op.size(), rng);
      if (trial % 2) {
        // Smooth fields probe the near-extremal regime.
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(kPi * (g.node(i) / 3.0)) + 0.1 * u[i];
      }
      const FieldNorms nf = norms(u, g, op);
      CHECK(nf.sup <= k.k_inf * nf.h2star);
      CHECK(nf.l2 <= k.B * nf.h2star * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("banded solve: identity, dense-LU oracle, SPD residual, singular pivot") {
  std::mt19937_64 rng(5);
  {
    const auto I = BandedMatrix<double>::identity(9);
    const Vector b = random_vector(9, rng);
    const Vector x = banded_solve(I, std::span<const double>(b));
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(x[i] == b[i]);
  }
  {
    const Grid g(BeamDomain{0.0, kPi}, 9);  // 8 unknowns
    const BandedOperator op(g);
    const Vector b = random_vector(op.size(), rng);
    const Vector x = banded_solve(op.to_banded<double>(), std::span<const double>(b));
    const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd ex = dense_biharmonic(g).partialPivLu().solve(eb);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - ex(static_cast<Eigen::Index>(i))) < 1e-11);
  }
  {
    // Random diagonally dominant symmetric pentadiagonal matrix.
    const std::size_t n = 64;
    BandedMatrix<double> M(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 1; d <= 2 && i + d < n; ++d) {
        const double v = u(rng);
        M(i, i + d) = v;
        M(i + d, i) = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) M(i, i) = 5.0 + u(rng);
    const Vector b = random_vector(n, rng);
    const Vector x = banded_solve(M, std::span<const double>(b));
    const Vector Mx = M.multiply(std::span<const double>(x));
    double res = 0.0;
    double bn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res += (Mx[i] - b[i]) * (Mx[i] - b[i]);
      bn += b[i] * b[i];
    }
    CHECK(std::sqrt(res) < 1e-12 * std::sqrt(bn));
  }
  {
    // Pivoting inside the band: zero leading diagonal.
    BandedMatrix<double> M(3);
    M(0, 1) = 1.0;
    M(1, 0) = 1.0;
    M(1, 1) = 1.0;
    M(2, 2) = 2.0;
    const Vector b{1.0, 3.0, 4.0};
    const Vector x = banded_solve(M, std::span<const double>(b));
    CHECK(x[0] == Approx(2.0));
    CHECK(x[1] == Approx(1.0));
    CHECK(x[2] == Approx(2.0));
  }
  {
    BandedMatrix<double> M(4);
    for (std::size_t i = 0; i < 4; ++i) M(i, i) = 1.0;
    M(3, 3) = 0.0;
    const Vector b(4, 1.0);
    CHECK_THROWS_AS(banded_solve(M, std::span<const double>(b)), SolverError);
  }
}

TEST_CASE("extended-precision banded assembly matches double to rounding") {
  const Grid g(BeamDomain{0.0, kPi}, 32);
  const BandedOperator op(g);
  const auto Ad = op.to_banded<double>();
  const auto Al = op.to_banded<long double>();
  for (std::size_t i = 0; i < op.size(); ++i) {
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(op.size(), i + 3); ++j) {
      CHECK(static_cast<double>(Al(i, j)) == Approx(Ad(i, j)).epsilon(1e-15));
    }
  }
}
