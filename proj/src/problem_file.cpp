#include "beamdecay/problem_file.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

#include "beamdecay/error.hpp"
#include "beamdecay/io.hpp"

namespace beamdecay {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"domain", {"c", "d"}},
      {"grid", {"N"}},
      {"damping", {"form", "m", "a", "a1", "a2", "terms"}},
      {"restoring", {"kind", "lambda", "p", "D"}},
      {"forcing", {"kind", "profile", "profile_file", "omega"}},
      {"initial", {"u0", "u0_file", "u1", "u1_file"}},
      {"time", {"dt", "T", "newton_tol", "newton_max_iter", "output_stride"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void check_key(const std::string& section, const std::string& key) {
  const auto it = schema().find(section);
  if (it == schema().end()) throw ParseError("unknown section [" + section + "]");
  if (!it->second.contains(key)) {
    throw ParseError("unknown key '" + key + "' in section [" + section + "]");
  }
}

bool strict_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

class Resolver {
 public:
  explicit Resolver(const ProblemFile& f) : f_(f) {}

  const std::string* find(const std::string& section, const std::string& key) const {
    const auto s = f_.sections.find(section);
    if (s == f_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double real(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) throw ParseError("missing required key '" + key + "' in section [" + section + "]");
    return wrap(section, key, [&] { return parse_real(*v); });
  }

  double real_or(const std::string& section, const std::string& key, double fallback) const {
    return find(section, key) ? real(section, key) : fallback;
  }

  int integer_or(const std::string& section, const std::string& key, std::optional<int> fallback) const {
    const std::string* v = find(section, key);
    if (!v) {
      if (fallback) return *fallback;
      throw ParseError("missing required key '" + key + "' in section [" + section + "]");
    }
    double x = 0.0;
    if (!strict_double(*v, x) || x != std::floor(x) || std::abs(x) > 1e9) {
      throw ParseError("[" + section + "] " + key + ": '" + *v + "' is not an integer");
    }
    return static_cast<int>(x);
  }

  std::string word_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
  }

  std::filesystem::path path(const std::string& raw) const {
    std::filesystem::path p(raw);
    return p.is_absolute() ? p : f_.base_dir / p;
  }

  /// Nodal field from `key` (synthesized) or `key_file`.
  Vector field(const std::string& section, const std::string& key, const Grid& grid,
               bool required) const {
    const std::string* spec = find(section, key);
    const std::string* file = find(section, key + "_file");
    if (spec && file) {
      throw ParseError("[" + section + "] give either '" + key + "' or '" + key + "_file', not both");
    }
    if (file) {
      Vector v = read_vector_file(path(*file));
      if (v.size() != grid.interior_size()) {
        throw ParseError("[" + section + "] " + key + "_file: expected " +
                         std::to_string(grid.interior_size()) + " values (N-1), got " +
                         std::to_string(v.size()));
      }
      return v;
    }
    if (!spec) {
      if (required) throw ParseError("missing required key '" + key + "' in section [" + section + "]");
      return Vector(grid.interior_size(), 0.0);
    }
    return synthesize(section, key, *spec, grid);
  }

 private:
  template <class F>
  static double wrap(const std::string& section, const std::string& key, F&& f) {
    try {
      return f();
    } catch (const ParseError& e) {
      throw ParseError("[" + section + "] " + key + ": " + e.what());
    }
  }

  static Vector synthesize(const std::string& section, const std::string& key,
                           const std::string& spec, const Grid& grid) {
    std::istringstream in(spec);
    std::string kind;
    in >> kind;
    if (kind == "zero") {
      std::string extra;
      if (in >> extra) throw ParseError("[" + section + "] " + key + ": unexpected '" + extra + "'");
      return Vector(grid.interior_size(), 0.0);
    }
    if (kind != "sine") {
      throw ParseError("[" + section + "] " + key + ": expected 'zero' or 'sine k=<int> amp=<real>'");
    }
    int k = 1;
    double amp = 1.0;
    std::string tok;
    while (in >> tok) {
      const auto eq = tok.find('=');
      const std::string name = tok.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : tok.substr(eq + 1);
      double x = 0.0;
      if (name == "k" && strict_double(value, x) && x == std::floor(x) && x >= 1.0) {
        k = static_cast<int>(x);
      } else if (name == "amp") {
        amp = wrap(section, key, [&] { return parse_real(value); });
      } else {
        throw ParseError("[" + section + "] " + key + ": bad sine parameter '" + tok + "'");
      }
    }
    return grid.sine_mode(k, amp);
  }

  const ProblemFile& f_;
};

std::vector<PowerTerm> parse_terms(const std::string& text) {
  std::vector<PowerTerm> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("[damping] terms: expected 'coefficient:exponent'");
    out.push_back({parse_real(t.substr(0, colon)), parse_real(t.substr(colon + 1))});
  }
  if (out.empty()) throw ParseError("[damping] terms: at least one term required");
  return out;
}

}  // namespace

double parse_real(std::string_view raw) {
  std::string s = trim(raw);
  double v = 0.0;
  if (strict_double(s, v)) return v;
  const auto pos = s.find("pi");
  if (pos == std::string::npos) throw ParseError("'" + s + "' is not a number");
  std::string pre = trim(s.substr(0, pos));
  std::string post = trim(s.substr(pos + 2));
  if (!pre.empty() && pre.back() == '*') pre = trim(pre.substr(0, pre.size() - 1));
  double factor = 1.0;
  if (pre == "-") {
    factor = -1.0;
  } else if (!pre.empty() && pre != "+" && !strict_double(pre, factor)) {
    throw ParseError("'" + s + "' is not a number");
  }
  double divisor = 1.0;
  if (!post.empty()) {
    if (post.front() != '/' || !strict_double(trim(post.substr(1)), divisor) || divisor == 0.0) {
      throw ParseError("'" + s + "' is not a number");
    }
  }
  return factor * std::numbers::pi / divisor;
}

ProblemFile parse_problem_text(std::string_view text, const std::filesystem::path& base_dir) {
  ProblemFile file;
  file.base_dir = base_dir;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(where + "malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!schema().contains(section)) throw ParseError(where + "unknown section [" + section + "]");
      file.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(where + "expected 'key = value'");
    if (section.empty()) throw ParseError(where + "key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    try {
      check_key(section, key);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    auto& entries = file.sections[section];
    if (entries.contains(key)) throw ParseError(where + "duplicate key '" + key + "' in [" + section + "]");
    entries[key] = value;
  }
  return file;
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_problem_text(text, path.parent_path());
}

void apply_override(ProblemFile& file, std::string_view assignment) {
  const std::string a = trim(assignment);
  const auto eq = a.find('=');
  const auto dot = a.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ParseError("override '" + a + "': expected section.key=value");
  }
  const std::string section = trim(a.substr(0, dot));
  const std::string key = trim(a.substr(dot + 1, eq - dot - 1));
  check_key(section, key);
  file.sections[section][key] = trim(a.substr(eq + 1));
  file.overrides.push_back(a);
}

ValidatedProblem build_problem(const ProblemFile& file, const ValidationOptions& options) {
  const Resolver r(file);

  const BeamDomain domain{r.real_or("domain", "c", 0.0), r.real("domain", "d")};
  const Grid grid(domain, r.integer_or("grid", "N", std::nullopt));

  DampingSpec damping;
  const std::string form = r.word_or("damping", "form", "canonical");
  const double m = r.real("damping", "m");
  if (form == "canonical") {
    if (r.find("damping", "terms")) throw ParseError("[damping] terms requires form = composite");
    const double a = r.real("damping", "a");
    damping = DampingSpec::canonical(m, a, r.real_or("damping", "a1", a), r.real_or("damping", "a2", a));
  } else if (form == "composite") {
    if (r.find("damping", "a")) throw ParseError("[damping] a applies to form = canonical only");
    const std::string* terms = r.find("damping", "terms");
    if (!terms) throw ParseError("missing required key 'terms' in section [damping]");
    damping = DampingSpec::composite(m, r.real("damping", "a1"), r.real("damping", "a2"),
                                     parse_terms(*terms));
  } else {
    throw ParseError("[damping] form: expected 'canonical' or 'composite', got '" + form + "'");
  }

  RestoringSpec restoring;
  const std::string rkind = r.word_or("restoring", "kind", "zero");
  if (rkind == "zero") {
    if (r.find("restoring", "lambda") || r.find("restoring", "p")) {
      throw ParseError("[restoring] lambda/p require kind = odd_power");
    }
    restoring = RestoringSpec::zero();
    restoring.D = r.real_or("restoring", "D", 0.0);
  } else if (rkind == "odd_power") {
    restoring = RestoringSpec::odd_power(r.real("restoring", "lambda"),
                                         r.integer_or("restoring", "p", std::nullopt));
    restoring.D = r.real_or("restoring", "D", 0.0);
  } else {
    throw ParseError("[restoring] kind: expected 'zero' or 'odd_power', got '" + rkind + "'");
  }

  ForcingSpec forcing;
  const std::string fkind = r.word_or("forcing", "kind", "zero");
  if (fkind == "zero") {
    if (r.find("forcing", "profile") || r.find("forcing", "profile_file") || r.find("forcing", "omega")) {
      throw ParseError("[forcing] profile/omega require kind = static or harmonic");
    }
    forcing = ForcingSpec::zero();
  } else if (fkind == "static") {
    if (r.find("forcing", "omega")) throw ParseError("[forcing] omega requires kind = harmonic");
    forcing = ForcingSpec::static_profile(r.field("forcing", "profile", grid, true));
  } else if (fkind == "harmonic") {
    const double omega = r.real("forcing", "omega");
    forcing = ForcingSpec::time_dependent(
        r.field("forcing", "profile", grid, true), [omega](double t) { return std::cos(omega * t); },
        "harmonic omega=" + format_real(omega));
  } else {
    throw ParseError("[forcing] kind: expected 'zero', 'static' or 'harmonic', got '" + fkind + "'");
  }

  InitialData init{r.field("initial", "u0", grid, true), r.field("initial", "u1", grid, false)};

  SimConfig cfg;
  cfg.dt = r.real_or("time", "dt", cfg.dt);
  cfg.T = r.real("time", "T");
  cfg.newton_tol = r.real_or("time", "newton_tol", cfg.newton_tol);
  cfg.newton_max_iter = r.integer_or("time", "newton_max_iter", cfg.newton_max_iter);
  cfg.output_stride = r.integer_or("time", "output_stride", cfg.output_stride);

  return validate_problem(domain, grid, damping, restoring, forcing, init, cfg, options);
}

std::string canonical_text(const ProblemFile& file) {
  std::ostringstream out;
  for (const auto& [section, entries] : file.sections) {
    out << '[' << section << "]\n";
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> referenced_files(const ProblemFile& file) {
  std::vector<std::filesystem::path> out;
  const Resolver r(file);
  for (const auto& [section, entries] : file.sections) {
    for (const auto& [key, value] : entries) {
      if (key.ends_with("_file")) out.push_back(std::filesystem::absolute(r.path(value)));
    }
  }
  return out;
}

}  // namespace beamdecay
