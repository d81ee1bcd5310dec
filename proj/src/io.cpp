#include "beamdecay/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "beamdecay/error.hpp"

namespace beamdecay {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& field, const std::string& context) {
  const std::string s = trim(field);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError(context + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& out, std::span<const EnergyRecord> records) {
  out << kTrajectoryHeader << '\n';
  for (const EnergyRecord& r : records) {
    out << format_real(r.t) << ',' << format_real(r.E) << ',' << format_real(r.H) << ','
        << format_real(r.dissipation) << ',' << format_real(r.l2_u) << ','
        << format_real(r.h2star_u) << ',' << format_real(r.l2_v) << ',' << format_real(r.sup_u)
        << ',' << r.newton_iters << '\n';
  }
}

std::vector<EnergyRecord> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTrajectoryHeader) {
    throw ParseError("trajectory CSV: header must be '" + std::string(kTrajectoryHeader) + "'");
  }
  std::vector<EnergyRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    const std::string ctx = "trajectory CSV row " + std::to_string(row);
    if (f.size() != 9) throw ParseError(ctx + ": expected 9 columns");
    EnergyRecord r;
    r.t = to_real(f[0], ctx);
    r.E = to_real(f[1], ctx);
    r.H = to_real(f[2], ctx);
    r.dissipation = to_real(f[3], ctx);
    r.l2_u = to_real(f[4], ctx);
    r.h2star_u = to_real(f[5], ctx);
    r.l2_v = to_real(f[6], ctx);
    r.sup_u = to_real(f[7], ctx);
    r.newton_iters = static_cast<int>(to_real(f[8], ctx));
    out.push_back(r);
  }
  return out;
}

void write_certificate_report(std::ostream& out, const Certificate& cert) {
  out << "# beamdecay decay certificate\n";
  if (!cert.provenance.empty()) out << "# problem_digest = " << cert.provenance << '\n';
  for (const TraceEntry& e : cert.trace) {
    out << e.name << " = " << format_real(e.value) << " # " << e.formula << '\n';
  }
}

Certificate read_certificate_report(std::istream& in) {
  Certificate c;
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos && trim(body.substr(0, eq)) == "problem_digest") {
        c.provenance = trim(body.substr(eq + 1));
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("certificate report: expected 'name = value # formula'");
    const std::string name = trim(t.substr(0, eq));
    std::string rest = t.substr(eq + 1);
    std::string formula;
    const auto hash = rest.find('#');
    if (hash != std::string::npos) {
      formula = trim(rest.substr(hash + 1));
      rest = rest.substr(0, hash);
    }
    const double v = to_real(rest, "certificate report entry '" + name + "'");
    c.trace.push_back({name, v, formula});
    values[name] = v;
  }
  auto need = [&values](const char* name) {
    const auto it = values.find(name);
    if (it == values.end()) throw ParseError(std::string("certificate report: missing '") + name + "'");
    return it->second;
  };
  c.a1 = need("a1");
  c.a2 = need("a2");
  c.m = need("m");
  c.E0 = need("E0");
  c.B = need("B");
  c.k_inf = need("k_inf");
  c.M = need("M");
  c.gamma = need("gamma");
  c.delta = need("delta");
  c.c_delta = need("c_delta");
  c.kappa = need("kappa");
  c.eps = need("eps");
  c.r = need("r");
  c.prefactor = need("prefactor");
  return c;
}

void write_certificate_csv(std::ostream& out, const Certificate& cert) {
  out << "constant,value,formula\n";
  for (const TraceEntry& e : cert.trace) {
    out << e.name << ',' << format_real(e.value) << ',' << csv_quote(e.formula) << '\n';
  }
}

void write_audit_report(std::ostream& out, const AuditReport& report) {
  out << "# beamdecay trajectory audit, tol = " << format_real(report.tol) << '\n';
  for (const CheckResult& c : report.checks) {
    out << c.name << ": " << (c.passed ? "PASS" : "FAIL")
        << " worst_margin = " << format_real(c.worst_margin);
    if (c.first_violation) {
      out << " first_violation_index = " << *c.first_violation
          << " first_violation_t = " << format_real(c.first_violation_time);
    }
    out << '\n';
  }
  out << "overall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

void write_vector(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_real(v) << '\n';
}

Vector read_vector(std::istream& in) {
  Vector out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(to_real(t, "vector line " + std::to_string(row)));
  }
  return out;
}

Vector read_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  return read_vector(in);
}

void write_corollary_csv(std::ostream& out, std::span<const CorollaryRow> rows) {
  out << "t,h2star_diff,l2_v\n";
  for (const CorollaryRow& r : rows) {
    out << format_real(r.t) << ',' << format_real(r.h2star_diff) << ',' << format_real(r.l2_v) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "dt,max_l2_error,max_h2star_error,observed_order\n";
  for (const ConvergenceRow& r : rows) {
    out << format_real(r.dt) << ',' << format_real(r.errors.max_l2_error) << ','
        << format_real(r.errors.max_h2star_error) << ',' << (r.order ? format_real(*r.order) : "")
        << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << contents;
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace beamdecay
