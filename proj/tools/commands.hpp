#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phasedeco/model.hpp"

namespace phasedeco::cli {

enum class Command { figure, verify, evolve, steady };
enum class Method { closed, spectral, rk4 };

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kIo = 3 };

/// Parsed command line. Unset optionals fall back to the defaults of the
/// selected command; each figure has its own defaults.
struct RunConfig {
  Command command = Command::evolve;
  int figure_id = 1;

  std::optional<double> g_a, g_b, delta, gamma, omega, delta_mix;
  std::optional<double> t_max, time, gamma_max, delta_max;
  std::optional<int> points, points_y;
  double dt = 1e-4;
  Method method = Method::closed;
  std::string out_path = "-";
  bool inject_coherence_sign_flip = false;
};

/// A CSV table: `#` comment lines, a header row and numeric rows.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Writes the table with every number as %.12g.
void write_csv(const Table& table, std::ostream& os);
std::string format_number(double x);

/// Observables at one instant.
struct Observables {
  double t;
  double p_g;
  double c_ab;      ///< atom versus both cavities
  double c_fields;  ///< cavity a versus cavity b
  double c_a;       ///< atom versus cavity a
  double c_b;       ///< atom versus cavity b
  double purity;
  double trace;
};

/// Evaluates the observables on a time grid with the chosen engine. The
/// grid must start at 0 for rk4.
std::vector<Observables> observe(const ModelParams& p, double delta_mix,
                                 const std::vector<double>& t_grid, Method method, double dt);

Table figure_table(const RunConfig& cfg);
Table evolve_table(const RunConfig& cfg);
Table steady_table(const RunConfig& cfg);

struct CheckResult {
  std::string id;  ///< "a" .. "h"
  std::string name;
  double deviation;
  double tolerance;
  bool passed;
  bool skipped = false;
  std::string note;
};

std::vector<CheckResult> run_verification(const RunConfig& cfg);
void print_report(const std::vector<CheckResult>& checks, std::ostream& os);

/// Parses `args` (without the program name) and runs the command. Returns
/// an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasedeco::cli
