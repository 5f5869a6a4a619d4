// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/tools/config.hpp"
#include "crdra/tools/csv.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace crdra::tools {

enum class RowStatus { Ok, NotConverged, Infeasible, Failed };
std::string to_string(RowStatus status);

struct RunOutcome {
  CsvTable table;
  std::vector<RowStatus> status;  // one per row
  std::vector<std::string> diagnostics;

  bool any(RowStatus s) const;
  /// 0 when every row is Ok, 3 if any row is infeasible, else 4 if any row
  /// failed or did not converge.
  int exit_code() const;
};

struct Fig2Point {
  double power = 0.0;
  double optimal = 0.0;
  std::vector<double> projection;  // indexed by the number of nulled directions
};

/// Optimal and partial-projection rates at every sweep point.
std::vector<Fig2Point> fig2_sweep(const ExperimentConfig& config);

RunOutcome run_fig2(const ExperimentConfig& config);

/// Dispatches on `config.experiment`. Throws ConfigError for an unknown id.
RunOutcome run_experiment(const ExperimentConfig& config);

/// Oracle comparisons on small fixed instances; prints one PASS/FAIL line
/// per check to `out` and returns true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace crdra::tools
