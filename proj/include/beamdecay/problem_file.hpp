#pragma once

// Line-based problem files:
//
//   [domain]    c, d                      (c defaults to 0)
//   [grid]      N
//   [damping]   form = canonical | composite, m, a, a1, a2, terms = c:p, ...
//   [restoring] kind = zero | odd_power, lambda, p, D
//   [forcing]   kind = zero | static | harmonic, profile | profile_file, omega
//   [initial]   u0 | u0_file, u1 | u1_file
//   [time]      dt, T, newton_tol, newton_max_iter, output_stride
//
// Field values are `zero` or `sine k=<int> amp=<real>`; *_file names a text
// file with one value per interior node. Reals accept `pi` multiples such as
// `2*pi` or `pi/2`. '#' starts a comment. Unknown sections or keys are errors.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "beamdecay/domain.hpp"

namespace beamdecay {

struct ProblemFile {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::filesystem::path base_dir;       ///< resolves relative *_file paths
  std::vector<std::string> overrides;   ///< in the order applied
};

/// Throws ParseError on malformed lines, unknown sections/keys or duplicates.
ProblemFile parse_problem_text(std::string_view text, const std::filesystem::path& base_dir = {});
ProblemFile load_problem_file(const std::filesystem::path& path);

/// Applies `section.key=value`; throws ParseError for unknown keys.
void apply_override(ProblemFile& file, std::string_view assignment);

/// Resolves defaults, reads referenced files and validates. Throws
/// ParseError or ValidationError.
ValidatedProblem build_problem(const ProblemFile& file, const ValidationOptions& options = {});

/// Sorted `[section]` / `key = value` rendering of the resolved entries.
std::string canonical_text(const ProblemFile& file);

/// Absolute paths of every *_file entry.
std::vector<std::filesystem::path> referenced_files(const ProblemFile& file);

/// Parses a real with optional pi factor ("2*pi", "-pi/2", "1e-3").
double parse_real(std::string_view text);

}  // namespace beamdecay
