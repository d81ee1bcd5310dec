#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamdecay/error.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"
#include "problems.hpp"

using namespace beamdecay;
using beamdecay::testing::Instance;
using beamdecay::testing::sine_problem;
using doctest::Approx;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("energy of simple states") {
  for (int N : {16, 64, 1024}) {
    const Grid g(BeamDomain{0.0, kPi}, N);
    const BandedOperator op(g);
    const Vector z(g.interior_size(), 0.0);
    const Vector s = g.sine_mode(1);
    CHECK(energy(State{0.0, z, z}, op) == 0.0);
    const double lambda1 = second_difference_eigenvalue(g, 1);
    const double l2sq = inner_product(s, s, g.spacing());
    CHECK(energy(State{0.0, s, z}, op) == Approx(0.5 * lambda1 * lambda1 * l2sq).epsilon(1e-12));
    CHECK(energy(State{0.0, z, s}, op) == Approx(kPi / 4.0).epsilon(1e-12));
  }
  const Grid g(BeamDomain{0.0, kPi}, 1024);
  const Vector z(g.interior_size(), 0.0);
  CHECK(energy(State{0.0, g.sine_mode(1), z}, BandedOperator(g)) == Approx(kPi / 4.0).epsilon(1e-5));
}

TEST_CASE("perturbed energy") {
  const Grid g(BeamDomain{0.0, kPi}, 32);
  const BandedOperator op(g);
  const State s{0.0, g.sine_mode(1), g.sine_mode(2, 0.3)};
  CHECK(perturbed_energy(s, 0.0, op) == energy(s, op));
  const State t{0.0, g.sine_mode(1), g.sine_mode(1, 0.3)};
  CHECK(perturbed_energy(t, 0.1, op) ==
        Approx(energy(t, op) + 0.1 * inner_product(t.u, t.v, g.spacing())).epsilon(1e-15));
}

TEST_CASE("dissipation") {
  const Grid g(BeamDomain{0.0, kPi}, 32);
  const Vector z(g.interior_size(), 0.0);
  const DampingSpec lin = DampingSpec::canonical(2.0, 0.1);
  CHECK(dissipation(State{0.0, z, z}, lin, g.spacing()) == 0.0);
  const Vector v = g.sine_mode(3, 0.7);
  CHECK(dissipation(v, lin, g.spacing()) == Approx(0.2 * inner_product(v, v, g.spacing())));
  CHECK(dissipation(v, DampingSpec::canonical(3.5, 0.1), g.spacing()) > 0.0);
}

TEST_CASE("fit on exact log-linear data") {
  std::vector<double> t, e;
  for (int i = 0; i < 100; ++i) {
    t.push_back(0.1 * i);
    e.push_back(5.0 * std::exp(-0.3 * t.back()));
  }
  const DecayFit f = fit_decay_rate(t, e, {0.0, 10.0});
  CHECK(std::abs(f.rate - 0.3) < 1e-10);
  CHECK(f.intercept == Approx(std::log(5.0)).epsilon(1e-10));
  CHECK(f.samples == 100);
  CHECK(f.residual < 1e-10);
}

TEST_CASE("fit on perturbed log-linear data") {
  std::vector<double> t, e;
  for (int i = 0; i < 100; ++i) {
    t.push_back(0.2 * i);
    e.push_back(2.0 * std::exp(-0.5 * t.back()) * (1.0 + 0.01 * std::sin(t.back())));
  }
  const DecayFit f = fit_decay_rate(t, e, {0.0, 20.0});
  CHECK(std::abs(f.rate / 0.5 - 1.0) < 0.01);
}

TEST_CASE("fit preconditions") {
  std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> e(t.size(), 1.0);
  e[4] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, e, {0.0, 10.0}), Error);
  e[4] = 1.0;
  CHECK_THROWS_AS(fit_decay_rate(t, e, {0.0, 5.0}), Error);  // 6 samples
  CHECK_NOTHROW(fit_decay_rate(t, e, {0.0, 10.0}));
}

TEST_CASE("default window is the second half") {
  std::vector<double> t, e;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.05 * i);
    // Rate 1 on the first half, rate 0.25 on the second.
    const double x = t.back();
    e.push_back(x < 5.0 ? std::exp(-x) : std::exp(-5.0 - 0.25 * (x - 5.0)));
  }
  CHECK(fit_decay_rate(t, e).rate == Approx(0.25).epsilon(1e-9));
}

TEST_CASE("envelope fit of an oscillating series") {
  std::vector<double> t, y;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(0.01 * i);
    y.push_back(std::exp(-0.1 * t.back()) * std::abs(std::cos(t.back())));
  }
  const DecayFit f = fit_envelope_decay_rate(t, y, {20.0, 40.0});
  CHECK(f.rate == Approx(0.1).epsilon(1e-3));
  CHECK(f.samples >= 3);
  CHECK_THROWS_AS(fit_envelope_decay_rate(t, y, {20.0, 22.0}), Error);
}

TEST_CASE("linear trajectory tail rate is close to 2a") {
  const Trajectory traj = simulate(sine_problem(Instance{}));
  std::vector<double> t, e;
  for (const EnergyRecord& r : traj.records) {
    t.push_back(r.t);
    e.push_back(r.E);
  }
  CHECK(std::abs(fit_decay_rate(t, e).rate / 0.2 - 1.0) < 0.05);
}

TEST_CASE("records: monotone energy and sup bound k_inf sqrt(2 E0)") {
  for (double m : {2.0, 3.0, 4.0}) {
    Instance in;
    in.m = m;
    in.a = 0.5;
    in.amplitude = 1.5;
    in.T = 2.0;
    const ValidatedProblem p = sine_problem(in);
    const Trajectory traj = simulate(p);
    const double bound = discrete_constants(p.grid()).k_inf * std::sqrt(2.0 * traj.records.front().E);
    for (std::size_t n = 0; n < traj.records.size(); ++n) {
      const EnergyRecord& r = traj.records[n];
      CHECK(r.sup_u <= bound);
      CHECK(r.H == r.E);
      if (n > 0) CHECK(r.E <= traj.records[n - 1].E + 10.0 * in.newton_tol);
    }
  }
}

TEST_CASE("make_record fills every diagnostic") {
  const ValidatedProblem p = sine_problem(Instance{});
  const Grid& g = p.grid();
  const State s{0.5, g.sine_mode(1, 2.0), g.sine_mode(1, 1.0)};
  const EnergyRecord r = make_record(s, p, 0.05);
  CHECK(r.t == 0.5);
  CHECK(r.E == Approx(energy(s, p.op())));
  CHECK(r.H == Approx(perturbed_energy(s, 0.05, p.op())));
  CHECK(r.l2_u == Approx(2.0 * std::sqrt(inner_product(g.sine_mode(1), g.sine_mode(1), g.spacing()))));
  CHECK(r.sup_u == Approx(2.0));
  CHECK(r.h2star_u == Approx(std::sqrt(p.op().quadratic_form(s.u))));
  CHECK(r.dissipation == Approx(dissipation(s, p.damping(), g.spacing())));
}
