#include "beamdecay/domain.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "beamdecay/digest.hpp"
#include "beamdecay/error.hpp"
#include "beamdecay/nonlinearity.hpp"

namespace beamdecay {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Relative slack for floating-point spot checks of exact inequalities.
constexpr double kSpotSlack = 1e-12;

void check_damping(const DampingSpec& d, const ValidationOptions& options) {
  if (!std::isfinite(d.m) || d.m < 2.0) {
    fail("m out of range: m = " + num(d.m) + " violates m >= 2");
  }
  const bool undamped = options.allow_undamped && d.form == DampingForm::canonical &&
                        d.a == 0.0 && d.a1 == 0.0 && d.a2 == 0.0;
  if (undamped) return;
  if (!(d.a1 > 0.0)) fail("damping: a1 = " + num(d.a1) + " violates a1 > 0");
  if (!std::isfinite(d.a2) || d.a1 > d.a2) {
    fail("damping: a1 = " + num(d.a1) + " exceeds a2 = " + num(d.a2));
  }
  if (d.form == DampingForm::canonical) {
    if (!(d.a >= d.a1 && d.a <= d.a2)) {
      fail("damping: canonical coefficient a = " + num(d.a) + " outside [a1, a2] = [" +
           num(d.a1) + ", " + num(d.a2) + "]");
    }
  } else if (!d.custom_value || !d.custom_slope) {
    fail("damping: custom form requires value and slope callables");
  }

  const double f0 = damping_eval(d, 0.0);
  if (f0 != 0.0) fail("damping: F(0) = " + num(f0) + " but F(0) = 0 is required");

  const std::vector<double> xs = symmetric_sample_points();
  double previous = -INFINITY;
  for (double x : xs) {
    const double fx = damping_eval(d, x);
    if (!std::isfinite(fx)) fail("damping: F(" + num(x) + ") is not finite");
    if (fx < previous - kSpotSlack * std::abs(previous)) {
      fail("damping: F fails the monotonicity spot-check near x = " + num(x));
    }
    previous = fx;
    const double ax = std::abs(x);
    const double shape = ax + std::pow(ax, d.m - 1.0);
    if (std::abs(fx) < d.a1 * shape * (1.0 - kSpotSlack) ||
        std::abs(fx) > d.a2 * shape * (1.0 + kSpotSlack)) {
      fail("damping: F leaves the declared [a1, a2] envelope at x = " + num(x));
    }
    if (fx * x < d.a1 * (x * x + std::pow(ax, d.m)) * (1.0 - kSpotSlack)) {
      fail("damping: F(x) x >= a1 (x^2 + |x|^m) fails at x = " + num(x));
    }
  }
}

void check_restoring(const RestoringSpec& g) {
  switch (g.kind) {
    case RestoringKind::zero:
      if (g.D != 0.0) fail("restoring: G = 0 requires D = 0");
      return;
    case RestoringKind::odd_power:
      if (g.power < 1 || g.power % 2 == 0) {
        fail("restoring: exponent p = " + std::to_string(g.power) + " must be an odd integer >= 1");
      }
      if (!(g.lambda >= 0.0) || !std::isfinite(g.lambda)) {
        fail("restoring: coefficient lambda = " + num(g.lambda) + " violates lambda >= 0");
      }
      if (g.D > 0.0) fail("restoring: D = " + num(g.D) + " must be non-positive");
      return;
    case RestoringKind::custom:
      if (!g.custom_value || !g.custom_slope || !g.custom_primitive) {
        fail("restoring: custom G must ship value, slope and primitive");
      }
      if (g.D > 0.0) fail("restoring: D = " + num(g.D) + " must be non-positive");
      for (double u : symmetric_sample_points(-3.0, 2.0, 21)) {
        const double p = g.custom_primitive(u);
        if (!(p >= g.D)) {
          fail("restoring: primitive(" + num(u) + ") = " + num(p) + " falls below D = " + num(g.D));
        }
      }
      return;
  }
}

void check_forcing(const ForcingSpec& f, std::size_t n) {
  switch (f.kind) {
    case ForcingKind::zero:
      return;
    case ForcingKind::time_dependent:
      if (!f.modulation) fail("forcing: time-dependent forcing requires a modulation");
      [[fallthrough]];
    case ForcingKind::static_profile:
      if (f.values.size() != n) {
        fail("forcing: profile has " + std::to_string(f.values.size()) + " values, expected " +
             std::to_string(n));
      }
      if (!all_finite(f.values)) fail("forcing: non-finite profile entry");
      return;
  }
}

void check_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) fail("time: dt = " + num(cfg.dt) + " violates dt > 0");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) fail("time: T = " + num(cfg.T) + " violates T > 0");
  if (cfg.dt > cfg.T) fail("time: dt = " + num(cfg.dt) + " exceeds T = " + num(cfg.T));
  if (!(cfg.newton_tol > 0.0)) fail("time: newton_tol must be positive");
  if (cfg.newton_max_iter < 1) fail("time: newton_max_iter must be >= 1");
  if (cfg.output_stride < 1) fail("time: output_stride must be >= 1");
}

std::string fingerprint(const Grid& grid, const DampingSpec& d, const RestoringSpec& g,
                        const ForcingSpec& f, const InitialData& init, const SimConfig& cfg) {
  std::ostringstream s;
  s << "domain " << num(grid.domain().c) << ' ' << num(grid.domain().d) << '\n'
    << "grid " << grid.subdivisions() << '\n'
    << "damping " << static_cast<int>(d.form) << ' ' << num(d.m) << ' ' << num(d.a) << ' '
    << num(d.a1) << ' ' << num(d.a2) << ' ' << d.description << '\n'
    << "restoring " << static_cast<int>(g.kind) << ' ' << num(g.lambda) << ' ' << g.power << ' '
    << num(g.D) << ' ' << g.description << '\n'
    << "forcing " << static_cast<int>(f.kind) << ' ' << f.description;
  for (double x : f.values) s << ' ' << num(x);
  s << "\nu0";
  for (double x : init.u0) s << ' ' << num(x);
  s << "\nu1";
  for (double x : init.u1) s << ' ' << num(x);
  s << "\ntime " << num(cfg.dt) << ' ' << num(cfg.T) << ' ' << num(cfg.newton_tol) << ' '
    << cfg.newton_max_iter << ' ' << cfg.output_stride << '\n';
  return sha256_hex(s.str());
}

}  // namespace

DampingSpec DampingSpec::canonical(double m, double a) { return canonical(m, a, a, a); }

DampingSpec DampingSpec::canonical(double m, double a, double a1, double a2) {
  DampingSpec d;
  d.m = m;
  d.a = a;
  d.a1 = a1;
  d.a2 = a2;
  d.form = DampingForm::canonical;
  d.description = "canonical";
  return d;
}

DampingSpec DampingSpec::composite(double m, double a1, double a2, std::vector<PowerTerm> terms) {
  std::ostringstream desc;
  desc << "composite";
  for (const PowerTerm& t : terms) {
    if (!(t.coefficient >= 0.0) || !(t.exponent >= 1.0)) {
      throw ValidationError("damping: composite terms need coefficient >= 0 and exponent >= 1");
    }
    desc << ' ' << num(t.coefficient) << ':' << num(t.exponent);
  }
  auto value = [terms](double x) {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (const PowerTerm& t : terms) acc += t.coefficient * std::pow(ax, t.exponent);
    return x < 0.0 ? -acc : acc;
  };
  auto slope = [terms](double x) {
    double acc = 0.0;
    const double ax = std::abs(x) + kSlopeRegularization;
    for (const PowerTerm& t : terms) acc += t.coefficient * t.exponent * std::pow(ax, t.exponent - 1.0);
    return acc;
  };
  return custom(m, a1, a2, value, slope, desc.str());
}

DampingSpec DampingSpec::custom(double m, double a1, double a2, std::function<double(double)> value,
                                std::function<double(double)> slope, std::string description) {
  DampingSpec d;
  d.m = m;
  d.a1 = a1;
  d.a2 = a2;
  d.a = a1;
  d.form = DampingForm::custom;
  d.custom_value = std::move(value);
  d.custom_slope = std::move(slope);
  d.description = std::move(description);
  return d;
}

RestoringSpec RestoringSpec::zero() {
  RestoringSpec g;
  g.description = "zero";
  return g;
}

RestoringSpec RestoringSpec::odd_power(double lambda, int p) {
  RestoringSpec g;
  g.kind = RestoringKind::odd_power;
  g.lambda = lambda;
  g.power = p;
  g.D = 0.0;
  g.description = "odd_power";
  return g;
}

RestoringSpec RestoringSpec::custom(std::function<double(double)> value,
                                    std::function<double(double)> slope,
                                    std::function<double(double)> primitive, double D,
                                    std::string description) {
  RestoringSpec g;
  g.kind = RestoringKind::custom;
  g.custom_value = std::move(value);
  g.custom_slope = std::move(slope);
  g.custom_primitive = std::move(primitive);
  g.D = D;
  g.description = std::move(description);
  return g;
}

ForcingSpec ForcingSpec::zero() {
  ForcingSpec f;
  f.description = "zero";
  return f;
}

ForcingSpec ForcingSpec::static_profile(Vector values) {
  ForcingSpec f;
  f.kind = ForcingKind::static_profile;
  f.values = std::move(values);
  f.description = "static";
  return f;
}

ForcingSpec ForcingSpec::time_dependent(Vector profile, std::function<double(double)> modulation,
                                        std::string description) {
  ForcingSpec f;
  f.kind = ForcingKind::time_dependent;
  f.values = std::move(profile);
  f.modulation = std::move(modulation);
  f.description = std::move(description);
  return f;
}

Vector ForcingSpec::at(double t, std::size_t n) const {
  switch (kind) {
    case ForcingKind::zero:
      return Vector(n, 0.0);
    case ForcingKind::static_profile:
      return values;
    case ForcingKind::time_dependent: {
      const double s = modulation(t);
      Vector out = values;
      for (double& x : out) x *= s;
      return out;
    }
  }
  return Vector(n, 0.0);
}

std::vector<double> symmetric_sample_points(double lo_exp, double hi_exp, int per_side) {
  std::vector<double> pos;
  pos.reserve(static_cast<std::size_t>(per_side));
  for (int i = 0; i < per_side; ++i) {
    const double e = lo_exp + (hi_exp - lo_exp) * i / std::max(1, per_side - 1);
    pos.push_back(std::pow(10.0, e));
  }
  std::vector<double> out;
  out.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  for (double x : pos) out.push_back(x);
  return out;
}

ValidatedProblem validate_problem(const BeamDomain& domain, const Grid& grid,
                                  const DampingSpec& damping, const RestoringSpec& restoring,
                                  const ForcingSpec& forcing, const InitialData& init,
                                  const SimConfig& cfg, const ValidationOptions& options) {
  if (!(domain.c < domain.d)) {
    fail("domain: require c < d (got c = " + num(domain.c) + ", d = " + num(domain.d) + ")");
  }
  if (grid.domain().c != domain.c || grid.domain().d != domain.d) {
    fail("grid: built on a different domain");
  }
  if (grid.subdivisions() < 4) fail("grid: N must be >= 4");
  const std::size_t n = grid.interior_size();

  check_damping(damping, options);
  check_restoring(restoring);
  check_forcing(forcing, n);
  check_config(cfg);

  if (init.u0.size() != n || init.u1.size() != n) {
    fail("initial: u0/u1 need " + std::to_string(n) + " interior values (got " +
         std::to_string(init.u0.size()) + " and " + std::to_string(init.u1.size()) + ")");
  }
  if (!all_finite(init.u0) || !all_finite(init.u1)) fail("initial: non-finite initial data");

  ValidatedProblem p(grid, damping, restoring, forcing, init, cfg);
  p.options_ = options;
  if (restoring.kind != RestoringKind::zero) {
    p.inadmissible_reason_ = "certificate requires G ≡ 0";
  } else if (forcing.kind != ForcingKind::zero) {
    p.inadmissible_reason_ = "certificate requires f ≡ 0";
  } else if (!(damping.a1 > 0.0)) {
    p.inadmissible_reason_ = "certificate requires a1 > 0";
  }
  p.provenance_ = fingerprint(grid, damping, restoring, forcing, init, cfg);
  return p;
}

ValidatedProblem with_initial_data(const ValidatedProblem& p, InitialData init) {
  return validate_problem(p.domain(), p.grid(), p.damping(), p.restoring(), p.forcing(), init,
                          p.config(), p.options());
}

ValidatedProblem with_forcing(const ValidatedProblem& p, ForcingSpec forcing) {
  return validate_problem(p.domain(), p.grid(), p.damping(), p.restoring(), forcing, p.initial(),
                          p.config(), p.options());
}

ValidatedProblem with_config(const ValidatedProblem& p, const SimConfig& cfg) {
  return validate_problem(p.domain(), p.grid(), p.damping(), p.restoring(), p.forcing(),
                          p.initial(), cfg, p.options());
}

}  // namespace beamdecay
