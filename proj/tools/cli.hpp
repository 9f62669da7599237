#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwell/certify.hpp"

namespace dwell::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kStrictFailure = 3 };

enum class Command { Potential, Density, QScan, Certify, Solve, Figure1, Figure2 };
enum class Format { Csv, Report };

const char* to_string(Command c) noexcept;

struct RunConfig {
  Command command = Command::Figure1;
  double k = 1.0;
  double D = 3.0;
  double alpha = 0.5;
  double epsilon = 0.01;
  double M = 100.0;
  std::optional<std::size_t> grid_n;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::vector<double> alphas;  // qscan sweep; empty means the default list
  std::size_t count = 4;       // solve: number of eigenpairs
  std::string out;             // empty: stdout
  std::optional<Format> format;
  bool strict = false;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  Format effective_format() const;
};

/// Column table written as CSV: header row, '\n' line endings, every number
/// with 17 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t);
std::string format_number(double v);

Table potential_table(const RunConfig& cfg);
Table density_table(const RunConfig& cfg);
Table qscan_table(const RunConfig& cfg);
Table figure1_table(const RunConfig& cfg);
Table figure2_table(const RunConfig& cfg);

/// Flat report for `solve`: eigenvalues plus overlap diagnostics.
nlohmann::json solve_report(const RunConfig& cfg);

nlohmann::json to_json(const CertificationReport& r);
CertificationReport certification_from_json(const nlohmann::json& j);

/// key,value CSV rendering of a flat report (arrays joined with ';').
std::string report_to_csv(const nlohmann::json& report);

/// Parses argv, runs one command, writes its output. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dwell::cli
