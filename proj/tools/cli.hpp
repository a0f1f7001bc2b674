#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/comparison.hpp"

namespace kahler::cli {

/// Everything a run depends on. Echoed to config.echo.json; replaying it
/// reproduces the outputs byte for byte.
struct RunConfig {
  std::string command;          ///< model | series | check
  std::string which;            ///< thm3 | thm4 | counterexample | rigidity
  std::string potential_file;
  std::string catalog;          ///< "name:key=value,..."
  int n = 2;                    ///< model only
  std::optional<double> K;
  std::optional<double> r_min, r_max;
  std::optional<int> r_steps;
  int order = 6;
  std::optional<double> tol;
  double ode_tol = 1e-12;
  double rho = 0.05;
  std::vector<double> point;    ///< real coordinates (x1, y1, ...); empty is the origin
  std::string out;
  std::uint64_t seed = 1;
  int threads = 0;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Report plus CSV tables keyed by file stem, and the exit code.
struct Outputs {
  nlohmann::json report;
  std::map<std::string, std::string> tables;
  int exit_code = 0;
};

/// 0 holds, 2 violated, 3 inconclusive.
int exit_code(Verdict v);

Outputs cmd_model(const RunConfig& cfg);
Outputs cmd_series(const RunConfig& cfg);
Outputs cmd_check(const RunConfig& cfg);

/// Parses arguments, runs, writes outputs. Exit codes: 0 all holds,
/// 2 violated, 3 inconclusive, 1 usage or validation error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kahler::cli
