#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlat/radiation.hpp"

namespace qlat {

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

/// Inclusive linear grid.
struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  std::vector<double> values() const;
};

struct SweepConfig {
  std::string command;

  int n_qubits = 4;
  double ell = 2.0 / 3.0;
  double omega_q = 6.729;
  double omega_c = 6.729;
  double eta = 0.1;
  int branch = 0;

  /// "-" writes to standard output.
  std::string out = "-";
  OutputFormat format = OutputFormat::csv;
  /// 0 selects the hardware concurrency.
  int threads = 0;
  std::uint64_t seed = 20240601;

  // chi-sweep
  GridSpec k_grid{0.02, 30.0, 1500};

  // decay-sweep
  /// "ell" or "omega-q".
  std::string axis = "ell";
  GridSpec ell_grid{0.0, 1.0, 101};
  GridSpec omega_q_grid{0.5, 60.0, 120};
  bool both_branches = false;
  std::optional<PrefactorInputs> prefactor;

  // spectrum: sectors u = -r .. -r + sectors - 1
  int sectors = 5;

  // dynamics
  int modes = 800;
  double bandwidth = 2.0;
  /// Normalized prefactor p of the flat bath; gamma is reported in these units.
  double rate_scale = 0.01;
  double t_final = 120.0;
  double dt = 0.05;
  int record_stride = 10;
  double fit_start = 10.0;
  double fit_end = 100.0;
  bool per_l = false;

  /// Throws DomainError on inconsistent settings.
  void validate() const;
};

/// Outcome of one validation check.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string note;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> hard;
  /// Reported magnitudes without a pass/fail threshold.
  std::vector<CheckResult> soft;

  bool passed() const;
  std::string to_json() const;
};

/// Each run_* checks that the output is writable before computing and throws
/// IoError (with the path) if not.
void run_chi_sweep(const SweepConfig& config);
void run_decay_sweep(const SweepConfig& config);
void run_spectrum(const SweepConfig& config);
/// Writes the trajectory; when `out` is a file also writes `<out>.summary.json`
/// holding gamma_fit and gamma_analytic on a single line.
void run_dynamics(const SweepConfig& config);
/// Writes the JSON report and returns it.
ValidationReport run_validate(const SweepConfig& config);

/// Builds the full validation report without writing anything.
ValidationReport validation_suite(std::uint64_t seed);

/// Full command line entry point. Returns the process exit status:
/// 0 success, 1 validation failure, 2 bad arguments, 3 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// %.17g formatting used for every CSV number.
std::string format_double(double value);

}  // namespace qlat
