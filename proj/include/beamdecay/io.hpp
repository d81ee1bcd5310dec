#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beamdecay/certificate.hpp"
#include "beamdecay/integrator.hpp"
#include "beamdecay/lyapunov.hpp"
#include "beamdecay/modal.hpp"
#include "beamdecay/stationary.hpp"

namespace beamdecay {

/// Fixed 17-significant-digit rendering used by every data file.
std::string format_real(double x);

inline constexpr const char* kTrajectoryHeader =
    "t,E,H,dissipation,l2_u,h2star_u,l2_v,sup_u,newton_iters";

void write_trajectory_csv(std::ostream& out, std::span<const EnergyRecord> records);
/// Throws ParseError when the header or a row does not match the schema.
std::vector<EnergyRecord> read_trajectory_csv(std::istream& in);

/// `# name = value` header lines, then one `name = value # formula` line per
/// trace entry.
void write_certificate_report(std::ostream& out, const Certificate& cert);
Certificate read_certificate_report(std::istream& in);
/// `constant,value,formula`.
void write_certificate_csv(std::ostream& out, const Certificate& cert);

void write_audit_report(std::ostream& out, const AuditReport& report);

/// One value per line.
void write_vector(std::ostream& out, std::span<const double> values);
Vector read_vector(std::istream& in);
Vector read_vector_file(const std::filesystem::path& path);

/// `t,h2star_diff,l2_v`.
void write_corollary_csv(std::ostream& out, std::span<const CorollaryRow> rows);

/// `dt,max_l2_error,max_h2star_error,observed_order`.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

/// Writes `contents` to `path` or throws Error.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace beamdecay
