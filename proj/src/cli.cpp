#include "beamdecay/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamdecay/certificate.hpp"
#include "beamdecay/digest.hpp"
#include "beamdecay/error.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/io.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/modal.hpp"
#include "beamdecay/problem_file.hpp"
#include "beamdecay/stationary.hpp"

namespace beamdecay {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "beamdecay 0.1.0";

struct Common {
  std::string out_dir = ".";
  std::vector<std::string> sets;
};

struct LoadedProblem {
  fs::path path;
  ProblemFile file;
  ValidatedProblem problem;
};

LoadedProblem load(const std::string& path, const std::vector<std::string>& sets) {
  ProblemFile file = load_problem_file(path);
  for (const std::string& s : sets) apply_override(file, s);
  ValidatedProblem problem = build_problem(file);
  return {fs::path(path), std::move(file), std::move(problem)};
}

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Accumulates a RunManifest and writes it next to the primary output.
class Manifest {
 public:
  explicit Manifest(std::string command)
      : started_(std::chrono::system_clock::now()), steady_(std::chrono::steady_clock::now()) {
    doc_["tool"] = kVersion;
    doc_["command"] = std::move(command);
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
  }

  json& operator[](const char* key) { return doc_[key]; }

  void add_input(const fs::path& path) {
    doc_["inputs"].push_back({{"path", fs::absolute(path).lexically_normal().string()},
                              {"sha256", file_sha256_hex(path)}});
  }

  void add_problem(const LoadedProblem& lp) {
    add_input(lp.path);
    for (const fs::path& p : referenced_files(lp.file)) add_input(p);
    doc_["overrides"] = lp.file.overrides;
    doc_["resolved_problem"] = canonical_text(lp.file);
    doc_["problem_digest"] = lp.problem.provenance();
  }

  /// Writes `contents` to dir/name and records its digest.
  fs::path write(const fs::path& dir, const std::string& name, const std::string& contents) {
    const fs::path p = dir / name;
    write_text_file(p, contents);
    doc_["outputs"].push_back({{"name", name}, {"path", p.lexically_normal().string()},
                               {"sha256", sha256_hex(contents)}});
    return p;
  }

  fs::path finish(const fs::path& dir, const std::string& stem) {
    const auto elapsed = std::chrono::steady_clock::now() - steady_;
    doc_["started_utc"] = utc_timestamp(started_);
    doc_["wall_clock_seconds"] = std::chrono::duration<double>(elapsed).count();
    const fs::path p = dir / (stem + ".manifest.json");
    write_text_file(p, doc_.dump(2) + "\n");
    return p;
  }

 private:
  json doc_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point steady_;
};

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw Error("cannot create output directory '" + dir + "'");
  return p;
}

template <class F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

double initial_energy(const ValidatedProblem& p) {
  return energy(State{0.0, p.initial().u0, p.initial().u1}, p.op());
}

/// Certificate for an admissible problem, or an input error naming the
/// failed hypothesis.
Certificate certify_or_throw(const ValidatedProblem& p) {
  if (!p.certificate_admissible()) throw ValidationError(*p.inadmissible_reason());
  if (!(initial_energy(p) > 0.0)) throw ValidationError("E(0) = 0: decay is trivial");
  Certificate c = compute_certificate(p);
  return c;
}

void add_solver_stats(Manifest& m, const Trajectory& traj) {
  m["steps"] = traj.stats.steps;
  m["newton_iterations"] = traj.stats.total_newton_iterations;
  m["max_newton_iterations"] = traj.stats.max_newton_iterations;
  m["max_newton_residual"] = traj.stats.max_residual;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& problem_path, const Common& common, std::ostream& out) {
  const LoadedProblem lp = load(problem_path, common.sets);
  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("simulate");
  manifest.add_problem(lp);

  SimulateOptions opts;
  opts.keep_states = false;
  if (lp.problem.certificate_admissible() && initial_energy(lp.problem) > 0.0) {
    opts.eps = compute_certificate(lp.problem).eps;
  }
  const Trajectory traj = simulate(lp.problem, opts);

  manifest["eps"] = traj.eps ? json(*traj.eps) : json(nullptr);
  add_solver_stats(manifest, traj);
  const fs::path csv = manifest.write(
      dir, "trajectory.csv", render([&](std::ostream& s) { write_trajectory_csv(s, traj.records); }));
  manifest.finish(dir, "trajectory");
  out << "wrote " << csv.string() << " (" << traj.records.size() << " records, "
      << traj.stats.steps << " steps, " << traj.stats.total_newton_iterations
      << " Newton iterations)\n";
  return kExitOk;
}

// ----------------------------------------------------------------- certify

int cmd_certify(const std::string& problem_path, const Common& common, std::ostream& out) {
  const LoadedProblem lp = load(problem_path, common.sets);
  const Certificate cert = certify_or_throw(lp.problem);
  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("certify");
  manifest.add_problem(lp);
  manifest["eps"] = cert.eps;
  manifest["r"] = cert.r;

  const std::string report = render([&](std::ostream& s) { write_certificate_report(s, cert); });
  manifest.write(dir, "certificate.txt", report);
  manifest.write(dir, "certificate.csv",
                 render([&](std::ostream& s) { write_certificate_csv(s, cert); }));
  manifest.finish(dir, "certificate");
  out << report << "r = " << format_real(cert.r) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ verify

json read_json(const fs::path& p) {
  try {
    return json::parse(read_text_file(p));
  } catch (const json::exception& e) {
    throw ParseError("malformed manifest '" + p.string() + "': " + e.what());
  }
}

int cmd_verify(const std::string& csv_path, const std::string& cert_path, double tol,
               const Common& common, std::ostream& out) {
  if (!(tol >= 0.0) || !std::isfinite(tol)) throw ValidationError("--tol must be a finite value >= 0");
  const fs::path csv(csv_path);
  const fs::path traj_manifest = csv.parent_path() / (csv.stem().string() + ".manifest.json");
  if (!fs::exists(traj_manifest)) {
    throw ProvenanceError("trajectory manifest '" + traj_manifest.string() + "' not found");
  }
  const json tm = read_json(traj_manifest);

  std::ifstream cin_(cert_path);
  if (!cin_) throw ParseError("cannot read '" + cert_path + "'");
  const Certificate cert = read_certificate_report(cin_);
  std::ifstream tin(csv);
  if (!tin) throw ParseError("cannot read '" + csv_path + "'");
  const std::vector<EnergyRecord> records = read_trajectory_csv(tin);
  if (records.empty()) throw ParseError("trajectory CSV has no rows");

  const std::string digest = tm.value("problem_digest", std::string());
  if (digest.empty() || digest != cert.provenance) {
    throw ProvenanceError("manifest mismatch: trajectory problem digest " + digest +
                          " differs from certificate digest " + cert.provenance);
  }
  if (!tm.contains("eps") || !tm["eps"].is_number()) {
    throw ProvenanceError("manifest mismatch: trajectory was recorded without a perturbation eps");
  }
  const double eps = tm["eps"].get<double>();
  if (std::abs(eps - cert.eps) > 1e-15 * std::abs(cert.eps)) {
    throw ProvenanceError("manifest mismatch: trajectory eps " + format_real(eps) +
                          " differs from certificate eps " + format_real(cert.eps));
  }

  const AuditReport audit = verify_trajectory(records, cert, tol);
  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("verify");
  manifest.add_input(csv);
  manifest.add_input(traj_manifest);
  manifest.add_input(cert_path);
  manifest["problem_digest"] = digest;
  manifest["tol"] = tol;
  manifest["passed"] = audit.passed();
  const std::string report = render([&](std::ostream& s) { write_audit_report(s, audit); });
  manifest.write(dir, "audit.txt", report);
  manifest.finish(dir, "audit");
  out << report;
  return audit.passed() ? kExitOk : kExitAudit;
}

// -------------------------------------------------------------- stationary

void write_fit(std::ostream& s, const char* name, const DecayFit& f) {
  s << name << " = " << format_real(f.rate) << " # " << f.samples << " peaks, rms "
    << format_real(f.residual) << '\n';
}

int cmd_stationary(const std::string& problem_path, std::optional<double> residual_tol,
                   bool chain_simulation, const Common& common, std::ostream& out) {
  const LoadedProblem lp = load(problem_path, common.sets);
  const double tol = residual_tol.value_or(lp.problem.config().newton_tol);
  const StationarySolution sol = solve_stationary(lp.problem, tol);
  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("stationary");
  manifest.add_problem(lp);
  manifest["residual_tol"] = tol;
  manifest["residual_norm"] = sol.residual_norm;
  manifest["newton_iterations"] = sol.newton_iterations;

  manifest.write(dir, "u_hat.txt", render([&](std::ostream& s) { write_vector(s, sol.u_hat); }));
  const std::string report = render([&](std::ostream& s) {
    s << "# beamdecay stationary solution\n";
    s << "residual_norm = " << format_real(sol.residual_norm) << '\n';
    s << "newton_iterations = " << sol.newton_iterations << '\n';
    for (std::size_t k = 0; k < sol.residual_history.size(); ++k) {
      s << "residual[" << k << "] = " << format_real(sol.residual_history[k]) << '\n';
    }
  });
  manifest.write(dir, "stationary.txt", report);
  out << report;

  int code = kExitOk;
  if (chain_simulation) {
    const ValidatedProblem shifted = shifted_problem(lp.problem, sol);
    const Certificate cert = certify_or_throw(shifted);
    const Trajectory traj = simulate(lp.problem);
    const Trajectory wtraj = simulate(shifted, SimulateOptions{cert.eps, true});
    const CorollaryReport rep = corollary_check(traj, sol, cert, lp.problem.op());
    const double shift = max_shift_deviation(traj, wtraj, sol);
    const double shift_limit = 10.0 * lp.problem.config().newton_tol;
    const bool ok = rep.envelopes_hold() && rep.rates_dominate() && shift <= shift_limit;

    add_solver_stats(manifest, traj);
    manifest["eps"] = cert.eps;
    manifest["certified_rate"] = cert.r;
    manifest["passed"] = ok;
    manifest.write(dir, "trajectory.csv",
                   render([&](std::ostream& s) { write_trajectory_csv(s, traj.records); }));
    manifest.write(dir, "corollary.csv",
                   render([&](std::ostream& s) { write_corollary_csv(s, rep.rows); }));
    const std::string crep = render([&](std::ostream& s) {
      s << "# beamdecay convergence to the stationary state\n";
      s << "certified_rate = " << format_real(rep.certified_rate) << '\n';
      write_fit(s, "h2star_diff_rate", rep.diff_rate);
      write_fit(s, "l2_v_rate", rep.velocity_rate);
      s << "h2star_diff_envelope_margin = " << format_real(rep.diff_envelope_margin) << '\n';
      s << "l2_v_envelope_margin = " << format_real(rep.velocity_envelope_margin) << '\n';
      s << "shift_deviation = " << format_real(shift) << " # limit " << format_real(shift_limit)
        << '\n';
      write_audit_report(s, rep.energy_audit);
      s << "corollary: " << (ok ? "PASS" : "FAIL") << '\n';
    });
    manifest.write(dir, "corollary.txt", crep);
    out << crep;
    if (!ok) code = kExitAudit;
  }
  manifest.finish(dir, "stationary");
  return code;
}

// ------------------------------------------------------------------ oracle

int cmd_oracle(const std::string& problem_path, int halvings, const Common& common,
               std::ostream& out) {
  const LoadedProblem lp = load(problem_path, common.sets);
  if (halvings < 1) throw ValidationError("--dt-halvings must be >= 1");
  const DampingSpec& d = lp.problem.damping();
  if (d.form != DampingForm::canonical || d.m != 2.0) {
    throw ValidationError("oracle requires canonical damping with m = 2");
  }
  if (lp.problem.restoring().kind != RestoringKind::zero) {
    throw ValidationError("oracle requires G ≡ 0");
  }
  if (lp.problem.forcing().kind == ForcingKind::time_dependent) {
    throw ValidationError("oracle requires zero or static forcing");
  }
  const std::vector<ConvergenceRow> rows = dt_convergence(lp.problem, halvings);
  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("oracle");
  manifest.add_problem(lp);
  manifest["dt_halvings"] = halvings;
  const std::string table = render([&](std::ostream& s) { write_convergence_csv(s, rows); });
  manifest.write(dir, "convergence.csv", table);
  manifest.finish(dir, "convergence");
  out << table;
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError("--range '" + spec + "': expected section.key=v1,v2,...");
  }
  SweepAxis axis{spec.substr(0, eq), {}};
  std::istringstream in(spec.substr(eq + 1));
  std::string v;
  while (std::getline(in, v, ',')) {
    if (!v.empty()) axis.values.push_back(v);
  }
  if (axis.values.empty()) throw ParseError("--range '" + spec + "': no values");
  return axis;
}

struct SweepRow {
  double m = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::size_t N = 0;
  double dt = 0.0;
  double r_certified = 0.0;
  double r_fitted = 0.0;
};

SweepRow run_sweep_entry(const ProblemFile& file) {
  const ValidatedProblem p = build_problem(file);
  const Certificate cert = certify_or_throw(p);
  const Trajectory traj = simulate(p, SimulateOptions{cert.eps, false});
  std::vector<double> t;
  std::vector<double> e;
  for (const EnergyRecord& r : traj.records) {
    t.push_back(r.t);
    e.push_back(r.E);
  }
  SweepRow row{p.damping().m, p.damping().a1, p.damping().a2,
               static_cast<std::size_t>(p.grid().subdivisions()),
               p.config().dt, cert.r, fit_decay_rate(t, e).rate};
  return row;
}

int cmd_sweep(const std::string& problem_path, const std::vector<std::string>& ranges, int jobs,
              const Common& common, std::ostream& out) {
  ProblemFile base = load_problem_file(problem_path);
  for (const std::string& s : common.sets) apply_override(base, s);
  std::vector<SweepAxis> axes;
  for (const std::string& r : ranges) axes.push_back(parse_axis(r));
  if (axes.empty()) throw ParseError("sweep needs at least one --range");

  // Cartesian product, first axis outermost.
  std::vector<ProblemFile> entries{base};
  for (const SweepAxis& axis : axes) {
    std::vector<ProblemFile> next;
    for (const ProblemFile& e : entries) {
      for (const std::string& v : axis.values) {
        ProblemFile f = e;
        apply_override(f, axis.key + "=" + v);
        next.push_back(std::move(f));
      }
    }
    entries = std::move(next);
  }

  const std::size_t n = entries.size();
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = run_sweep_entry(entries[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  unsigned threads = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      const std::string where = "sweep entry " + std::to_string(i + 1) + " (" +
                                std::to_string(entries[i].overrides.size()) + " overrides, last '" +
                                entries[i].overrides.back() + "'): ";
      if (const auto* se = dynamic_cast<const SolverError*>(&e)) {
        throw SolverError(where + se->what(), se->step(), se->last_residual());
      }
      if (dynamic_cast<const ValidationError*>(&e)) throw ValidationError(where + e.what());
      if (dynamic_cast<const ParseError*>(&e)) throw ParseError(where + e.what());
      throw;
    }
  }

  const fs::path dir = prepare_out(common.out_dir);
  Manifest manifest("sweep");
  manifest.add_input(problem_path);
  for (const fs::path& p : referenced_files(base)) manifest.add_input(p);
  manifest["overrides"] = base.overrides;
  manifest["ranges"] = ranges;
  json digests = json::array();
  for (const ProblemFile& f : entries) digests.push_back(sha256_hex(canonical_text(f)));
  manifest["entry_digests"] = digests;
  manifest["jobs"] = threads;
  const std::string table = render([&](std::ostream& s) {
    s << "m,a1,a2,N,dt,r_certified,r_fitted\n";
    for (const SweepRow& r : rows) {
      s << format_real(r.m) << ',' << format_real(r.a1) << ',' << format_real(r.a2) << ',' << r.N
        << ',' << format_real(r.dt) << ',' << format_real(r.r_certified) << ','
        << format_real(r.r_fitted) << '\n';
    }
  });
  manifest.write(dir, "sweep.csv", table);
  manifest.finish(dir, "sweep");
  out << table;
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--set", c.sets, "override section.key=value (repeatable)")
      ->allow_extra_args(false)
      ->take_all();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Damped beam simulator with explicit exponential-decay certificates", "beamdecay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::string problem;
  std::string csv;
  std::string cert;
  double tol = kDefaultAuditTolerance;
  std::optional<double> residual_tol;
  bool chain = false;
  int halvings = 1;
  std::vector<std::string> ranges;
  int jobs = 0;

  CLI::App* sim = app.add_subcommand("simulate", "integrate a problem and write trajectory.csv");
  sim->add_option("problem", problem, "problem file")->required();
  add_common(sim, common);

  CLI::App* cer = app.add_subcommand("certify", "compute the decay certificate");
  cer->add_option("problem", problem, "problem file")->required();
  add_common(cer, common);

  CLI::App* ver = app.add_subcommand("verify", "audit a trajectory against a certificate");
  ver->add_option("trajectory", csv, "trajectory CSV")->required();
  ver->add_option("certificate", cert, "certificate report")->required();
  ver->add_option("--tol", tol, "relative audit tolerance")->capture_default_str();
  add_common(ver, common);

  CLI::App* sta = app.add_subcommand("stationary", "solve the stationary problem");
  sta->add_option("problem", problem, "problem file")->required();
  sta->add_option("--residual-tol", residual_tol, "Newton residual target (default: time.newton_tol)");
  sta->add_flag("--simulate", chain, "also simulate and check convergence to the stationary state");
  add_common(sta, common);

  CLI::App* ora = app.add_subcommand("oracle", "dt-convergence against the modal solution");
  ora->add_option("problem", problem, "problem file")->required();
  ora->add_option("--dt-halvings", halvings, "number of dt halvings")->capture_default_str();
  add_common(ora, common);

  CLI::App* swp = app.add_subcommand("sweep", "rate table over parameter ranges");
  swp->add_option("problem", problem, "template problem file")->required();
  swp->add_option("--range", ranges, "section.key=v1,v2,... (repeatable)")->take_all();
  swp->add_option("--jobs", jobs, "worker threads (0: hardware concurrency)")->capture_default_str();
  add_common(swp, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (sim->parsed()) return cmd_simulate(problem, common, out);
    if (cer->parsed()) return cmd_certify(problem, common, out);
    if (ver->parsed()) return cmd_verify(csv, cert, tol, common, out);
    if (sta->parsed()) return cmd_stationary(problem, residual_tol, chain, common, out);
    if (ora->parsed()) return cmd_oracle(problem, halvings, common, out);
    if (swp->parsed()) return cmd_sweep(problem, ranges, jobs, common, out);
  } catch (const SolverError& e) {
    err << "solver failure";
    if (e.step()) err << " at step " << *e.step();
    err << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const ValidationError& e) {
    err << "invalid problem: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ProvenanceError& e) {
    err << "provenance error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace beamdecay
