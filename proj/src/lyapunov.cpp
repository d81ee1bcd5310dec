#include "beamdecay/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "beamdecay/error.hpp"
#include "beamdecay/nonlinearity.hpp"

namespace beamdecay {

double energy(const State& state, const BandedOperator& op) {
  const double h = op.spacing();
  return 0.5 * inner_product(state.v, state.v, h) + 0.5 * op.quadratic_form(state.u);
}

double perturbed_energy(const State& state, double eps, const BandedOperator& op) {
  return energy(state, op) + eps * inner_product(state.u, state.v, op.spacing());
}

double dissipation(std::span<const double> velocity, const DampingSpec& damping, double h) {
  double acc = 0.0;
  for (double w : velocity) acc += damping_eval(damping, w) * w;
  return h * acc;
}

double dissipation(const State& state, const DampingSpec& damping, double h) {
  return dissipation(state.v, damping, h);
}

EnergyRecord make_record(const State& state, const ValidatedProblem& problem,
                         std::optional<double> eps) {
  const BandedOperator& op = problem.op();
  const double h = op.spacing();
  EnergyRecord r;
  r.t = state.t;
  r.E = energy(state, op);
  r.H = eps ? r.E + *eps * inner_product(state.u, state.v, h) : r.E;
  r.dissipation = dissipation(state, problem.damping(), h);
  const FieldNorms nu = norms(state.u, problem.grid(), op);
  r.l2_u = nu.l2;
  r.h2star_u = nu.h2star;
  r.sup_u = nu.sup;
  r.l2_v = std::sqrt(inner_product(state.v, state.v, h));
  return r;
}

namespace {

DecayFit log_linear_fit(const std::vector<double>& ts, const std::vector<double>& ys) {
  const double n = static_cast<double>(ts.size());
  double tbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tbar += ts[i];
    ybar += ys[i];
  }
  tbar /= n;
  ybar /= n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tbar) * (ts[i] - tbar);
    sty += (ts[i] - tbar) * (ys[i] - ybar);
  }
  if (!(stt > 0.0)) throw Error("fit_decay_rate: window samples share one time value");
  const double slope = sty / stt;
  DecayFit fit;
  fit.rate = -slope;
  fit.intercept = ybar - slope * tbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = ys[i] - (fit.intercept + slope * ts[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.samples = ts.size();
  return fit;
}

}  // namespace

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> values,
                        FitWindow window) {
  if (t.size() != values.size()) throw Error("fit_decay_rate: length mismatch");
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.lo || t[i] > window.hi) continue;
    if (!(values[i] > 0.0)) {
      throw Error("fit_decay_rate: non-positive value at t = " + std::to_string(t[i]));
    }
    ts.push_back(t[i]);
    ys.push_back(std::log(values[i]));
  }
  if (ts.size() < 10) {
    throw Error("fit_decay_rate: " + std::to_string(ts.size()) +
                " samples in window, at least 10 required");
  }
  return log_linear_fit(ts, ys);
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> values) {
  if (t.empty()) throw Error("fit_decay_rate: empty series");
  const double end = t.back();
  return fit_decay_rate(t, values, FitWindow{0.5 * end, end});
}

DecayFit fit_envelope_decay_rate(std::span<const double> t, std::span<const double> values,
                                 FitWindow window) {
  if (t.size() != values.size()) throw Error("fit_envelope_decay_rate: length mismatch");
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < window.lo || t[i] > window.hi) continue;
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      if (!(values[i] > 0.0)) continue;
      ts.push_back(t[i]);
      ys.push_back(std::log(values[i]));
    }
  }
  if (ts.size() < 3) {
    throw Error("fit_envelope_decay_rate: " + std::to_string(ts.size()) +
                " peaks in window, at least 3 required");
  }
  return log_linear_fit(ts, ys);
}

}  // namespace beamdecay
