// SPDX-License-Identifier: Apache-2.0
#include "crdra/tools/experiments.hpp"

#include "crdra/bc.hpp"
#include "crdra/dra.hpp"
#include "crdra/errors.hpp"
#include "crdra/ic.hpp"
#include "crdra/mac.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace crdra::tools {

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Ok: return "ok";
    case RowStatus::NotConverged: return "not_converged";
    case RowStatus::Infeasible: return "infeasible";
    case RowStatus::Failed: return "failed";
  }
  return "failed";
}

bool RunOutcome::any(RowStatus s) const { return std::find(status.begin(), status.end(), s) != status.end(); }

int RunOutcome::exit_code() const {
  if (any(RowStatus::Infeasible)) return 3;
  if (any(RowStatus::Failed) || any(RowStatus::NotConverged)) return 4;
  return 0;
}

namespace {

std::int64_t count(std::size_t n) { return static_cast<std::int64_t>(n); }

struct Budgets {
  std::vector<double> power;
  std::vector<double> interference;
};

Budgets at_sweep(const ExperimentConfig& c, double value) {
  Budgets b{c.power, c.interference};
  if (c.sweep.variable == "power") {
    std::fill(b.power.begin(), b.power.end(), value);
  } else {
    for (double& g : b.interference) {
      if (std::isfinite(g)) g = value;
    }
  }
  return b;
}

void require_sorted(const std::vector<double>& w) {
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k] > w[k - 1]) throw ConfigError("weights must be nonincreasing for this experiment");
  }
}

std::vector<std::string> labels(const char* transmit, std::size_t users, const char* interference, std::size_t pus) {
  std::vector<std::string> out;
  if (users == 0) {
    out.push_back(transmit);
  } else {
    for (std::size_t k = 0; k < users; ++k) out.push_back(std::string(transmit) + "_" + std::to_string(k + 1));
  }
  for (std::size_t j = 0; j < pus; ++j) out.push_back(std::string(interference) + "_" + std::to_string(j + 1));
  return out;
}

std::vector<std::string> common_comments(const ExperimentConfig& c, const std::string& units) {
  std::string budgets;
  for (double g : c.interference) budgets += (budgets.empty() ? "" : " ") + format_number(g);
  return {
      "experiment " + c.id + " (" + c.experiment + ")",
      "seed " + std::to_string(c.seed.value_or(0)) + ", tolerance " + format_number(c.tolerance),
      "sweep " + c.sweep.variable + " from " + format_number(c.sweep.start) + " to " + format_number(c.sweep.stop) +
          " over " + std::to_string(c.sweep.steps) + (c.sweep.log_scale ? " log-spaced" : " linearly spaced") +
          " points",
      "interference budgets " + (budgets.empty() ? std::string("none") : budgets),
      units,
  };
}

void usage_columns(CsvTable& t, const std::vector<std::string>& names) {
  for (const auto& n : names) t.columns.push_back("usage_" + n);
}

void append_usage(std::vector<Cell>& row, const std::vector<std::string>& names, const SolveReport* report) {
  for (const auto& n : names) {
    double v = 0.0;
    if (report) {
      for (const auto& c : report->constraints) {
        if (c.label == n) v = c.usage;
      }
    }
    row.push_back(v);
  }
}

// Runs `solve`; a numerical failure or infeasibility flags the row instead
// of stopping the sweep. Configuration problems propagate.
template <class F>
RowStatus guarded(RunOutcome& out, const std::string& where, F&& solve) {
  try {
    return solve();
  } catch (const InfeasibleError& e) {
    out.diagnostics.push_back(where + ": " + e.what());
    return RowStatus::Infeasible;
  } catch (const NumericalError& e) {
    out.diagnostics.push_back(where + ": " + e.what());
    return RowStatus::Failed;
  }
}

// A zero-only solution means no transmission fits the budgets: the scenario
// is reported as infeasible rather than as a zero-rate optimum.
RowStatus report_status(const SolveReport& r) {
  if (r.zero_only) throw InfeasibleError(r.warnings.empty() ? "only the zero covariance is feasible" : r.warnings.front());
  return r.converged ? RowStatus::Ok : RowStatus::NotConverged;
}

DualOptions dual_options(const ExperimentConfig& c) {
  DualOptions o;
  o.tolerance = c.tolerance;
  o.record_trace = false;
  return o;
}

// Rows shared by the dual-method rate solvers.
struct RateTable {
  RunOutcome out;
  std::vector<std::string> names;

  RateTable(const ExperimentConfig& c, std::vector<std::string> constraint_names) : names(std::move(constraint_names)) {
    out.table.comments = common_comments(c, "objective, dual bound and gap in bits per channel use; usage in power units");
    out.table.columns = {"experiment", "sweep_value", "method", "status", "objective_bits", "dual_bound_bits",
                         "gap_bits", "iterations"};
    usage_columns(out.table, names);
  }

  void add(const ExperimentConfig& c, double x, const std::string& method, RowStatus status, const SolveReport* r) {
    const bool ok = r && status != RowStatus::Failed && status != RowStatus::Infeasible;
    std::vector<Cell> row{c.id, x, method, to_string(status), ok ? r->objective : 0.0, ok ? r->dual_bound : 0.0,
                          ok ? r->gap : 0.0, ok ? count(r->iterations) : std::int64_t{0}};
    append_usage(row, names, ok ? r : nullptr);
    out.table.rows.push_back(std::move(row));
    out.status.push_back(status);
  }
};

struct Fig2Run {
  std::vector<Fig2Point> points;
  RunOutcome outcome;
};

Fig2Run fig2_run(const ExperimentConfig& c) {
  c.validate();
  const NetworkInstance inst = generate_instance(c.topology(), c.fading());
  RateTable t(c, labels("ptpc", 0, "pipc", c.pu_antennas.size()));
  t.out.table.comments.push_back("method optimal is the exact capacity; projection_b<n> nulls n PU directions");
  Fig2Run run;
  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    const CapacityProblem problem = CapacityProblem::from_instance(inst, b.power.front(), b.interference);
    Fig2Point point;
    point.power = b.power.front();
    SolveReport r;
    RowStatus s = guarded(t.out, "optimal", [&] {
      r = solve_capacity(problem, dual_options(c));
      return report_status(r);
    });
    point.optimal = r.objective;
    t.add(c, x, "optimal", s, &r);
    for (std::size_t nulled = 0; nulled <= max_nulled_directions(problem); ++nulled) {
      SolveReport q;
      const std::string method = "projection_b" + std::to_string(nulled);
      s = guarded(t.out, method, [&] {
        q = partial_projection(problem, nulled, dual_options(c));
        return report_status(q);
      });
      point.projection.push_back(q.objective);
      t.add(c, x, method, s, &q);
    }
    run.points.push_back(std::move(point));
  }
  run.outcome = std::move(t.out);
  return run;
}

RunOutcome run_mac(const ExperimentConfig& c) {
  require_sorted(c.weights);
  NetworkInstance inst = generate_instance(c.topology(), c.fading());
  inst.weights = c.weights;
  RateTable t(c, labels("ptpc", c.users, "pipc", c.pu_antennas.size()));
  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    SolveReport r;
    const RowStatus s = guarded(t.out, "mac", [&] {
      r = solve_mac_wsr(MacProblem::from_instance(inst, b.power, b.interference), dual_options(c));
      return report_status(r);
    });
    t.add(c, x, "dual", s, &r);
  }
  return std::move(t.out);
}

RunOutcome run_bc(const ExperimentConfig& c) {
  require_sorted(c.weights);
  NetworkInstance inst = generate_instance(c.topology(), c.fading());
  inst.weights = c.weights;
  RateTable t(c, labels("ptpc", 0, "pipc", c.pu_antennas.size()));
  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    SolveReport r;
    const RowStatus s = guarded(t.out, "bc", [&] {
      r = solve_bc_wsr(BcProblem::from_instance(inst, b.power.front(), b.interference), dual_options(c));
      return report_status(r);
    });
    t.add(c, x, "dual", s, &r);
  }
  return std::move(t.out);
}

RunOutcome run_balance(const ExperimentConfig& c) {
  const NetworkInstance inst = generate_instance(c.topology(), c.fading());
  RunOutcome out;
  out.table.comments = common_comments(c, "alpha_star, min_sinr and max_sinr are linear SINR values; usage in power units");
  out.table.columns = {"experiment", "sweep_value", "method", "status", "alpha_star", "min_sinr", "max_sinr",
                       "bisection_steps"};
  const auto names = labels("ptpc", 0, "pipc", c.pu_antennas.size());
  usage_columns(out.table, names);
  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    BalanceResult r;
    const RowStatus s = guarded(out, "balance", [&] {
      r = solve_sinr_balancing(MisoBcProblem::from_instance(inst, b.power.front(), b.interference), c.tolerance);
      return RowStatus::Ok;
    });
    const bool ok = s == RowStatus::Ok;
    std::vector<Cell> row{c.id, x, "bisection", to_string(s), ok ? r.alpha_star : 0.0,
                          ok && r.sinr.size() ? r.sinr.minCoeff() : 0.0, ok && r.sinr.size() ? r.sinr.maxCoeff() : 0.0,
                          count(r.bisection_steps)};
    row.push_back(ok ? r.power_usage : 0.0);
    for (std::size_t j = 0; j < c.pu_antennas.size(); ++j) row.push_back(ok ? r.interference_usage[j] : 0.0);
    out.table.rows.push_back(std::move(row));
    out.status.push_back(s);
  }
  return out;
}

RunOutcome run_ic(const ExperimentConfig& c) {
  NetworkInstance inst = generate_instance(c.topology(), c.fading());
  inst.weights = c.weights;
  RunOutcome out;
  out.table.comments = common_comments(c, "objective in bits per channel use; usage in power units");
  out.table.comments.push_back("own_rate and weighted use the equal split of every interference budget");
  out.table.columns = {"experiment", "sweep_value", "method", "status", "objective_bits", "cycles", "damped_steps"};
  const auto names = labels("ptpc", c.users, "pipc", c.pu_antennas.size());
  usage_columns(out.table, names);

  auto add = [&](double x, const std::string& method, RowStatus s, const IcResult* r) {
    const bool ok = r && (s == RowStatus::Ok || s == RowStatus::NotConverged);
    std::vector<Cell> row{c.id, x, method, to_string(s), ok ? r->report.objective : 0.0,
                          ok ? count(r->report.iterations) : std::int64_t{0}, ok ? count(r->damped_steps) : std::int64_t{0}};
    append_usage(row, names, ok ? &r->report : nullptr);
    out.table.rows.push_back(std::move(row));
    out.status.push_back(s);
  };

  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    const IcProblem problem = IcProblem::from_instance(inst, b.power, b.interference);
    IcOptions opts;
    opts.subproblem = dual_options(c);
    for (auto [strategy, name] : {std::pair{IcStrategy::OwnRate, "own_rate"}, std::pair{IcStrategy::Weighted, "weighted"}}) {
      opts.strategy = strategy;
      IcResult r;
      const RowStatus s = guarded(out, name, [&] {
        r = solve_ic_wsr(problem, PipcSplit::equal(problem.interference, problem.users()), opts);
        return report_status(r.report);
      });
      add(x, name, s, &r);
    }
    if (c.split_resolution > 0) {
      opts.strategy = IcStrategy::OwnRate;
      IcResult r;
      const RowStatus s = guarded(out, "split_search", [&] {
        const SplitSearch found = search_split(problem, c.split_resolution, opts);
        r = solve_ic_wsr(problem, found.best, opts);
        return report_status(r.report);
      });
      add(x, "split_search", s, &r);
    }
  }
  return out;
}

RunOutcome run_dra(const ExperimentConfig& c) {
  require_sorted(c.weights);
  FadingScenario base = FadingScenario::generate(c.topology(), c.fading(), c.power, c.interference);
  base.weights = c.weights;
  RunOutcome out;
  out.table.comments = common_comments(c, "objective, dual bound and gap in bits per channel use averaged over " +
                                              std::to_string(c.dimensions) + " dimensions; usage is the average");
  out.table.comments.push_back("relative_gap = (mac_wsr objective - row objective) / mac_wsr objective");
  out.table.comments.push_back("tdma rows maximize the sum-rate; their duality gap is reported, not required to vanish");
  out.table.columns = {"experiment", "sweep_value", "method", "status", "objective_bits", "dual_bound_bits",
                       "gap_bits", "relative_gap", "iterations"};
  const auto names = labels("atpc", c.users, "aipc", c.pu_antennas.size());
  usage_columns(out.table, names);

  for (double x : c.sweep.values()) {
    const Budgets b = at_sweep(c, x);
    FadingScenario scenario = base;
    scenario.power = b.power;
    scenario.interference = b.interference;
    double full = 0.0;
    for (auto [utility, name] : {std::pair{DraUtility::MacWsr, "mac_wsr"}, std::pair{DraUtility::TdmaSumRate, "tdma"}}) {
      DraResult r;
      const RowStatus s = guarded(out, name, [&] {
        r = solve_dra(scenario, utility, dual_options(c));
        if (utility == DraUtility::TdmaSumRate) return RowStatus::Ok;
        return report_status(r.report);
      });
      const bool ok = s == RowStatus::Ok || s == RowStatus::NotConverged;
      if (utility == DraUtility::MacWsr) full = ok ? r.report.objective : 0.0;
      const double rel = ok && full > 0.0 ? (full - r.report.objective) / full : 0.0;
      std::vector<Cell> row{c.id, x, name, to_string(s), ok ? r.report.objective : 0.0,
                            ok ? r.report.dual_bound : 0.0, ok ? r.report.gap : 0.0, rel,
                            ok ? count(r.report.iterations) : std::int64_t{0}};
      append_usage(row, names, ok ? &r.report : nullptr);
      out.table.rows.push_back(std::move(row));
      out.status.push_back(s);
    }
  }
  return out;
}

InterferenceLaw law_of(const std::string& name) {
  if (name == "constant") return InterferenceLaw::Constant;
  if (name == "two-point") return InterferenceLaw::TwoPoint;
  return InterferenceLaw::Exponential;
}

RunOutcome run_diversity(const ExperimentConfig& c) {
  const RealVector gains = rayleigh_power_gains(c.samples, c.seed.value_or(0));
  RunOutcome out;
  out.table.comments = common_comments(c, "capacities in bits per channel use; power sweeps vary the PU transmit power");
  out.table.comments.push_back("c_constant: interference fixed at its mean; c_fluctuating: drawn from the law in column method");
  out.table.columns = {"experiment",    "sweep_value",   "method",        "status",  "c_constant", "c_fluctuating",
                       "difference",    "se_constant",   "se_fluctuating", "se_difference", "samples"};
  for (double x : c.sweep.values()) {
    const double q = c.sweep.variable == "power" ? x : c.pu_power;
    const double gamma = c.sweep.variable == "interference" ? x : c.interference.front();
    for (const auto& law : c.laws) {
      const DiversityEstimate d = interference_diversity(gains, q, gamma, {law_of(law), c.spread}, c.seed.value_or(0));
      out.table.rows.push_back({c.id, x, law, to_string(RowStatus::Ok), d.constant, d.fluctuating,
                                d.fluctuating - d.constant, d.constant_se, d.fluctuating_se, d.difference_se,
                                count(d.samples)});
      out.status.push_back(RowStatus::Ok);
    }
  }
  return out;
}

}  // namespace

std::vector<Fig2Point> fig2_sweep(const ExperimentConfig& config) { return fig2_run(config).points; }

RunOutcome run_fig2(const ExperimentConfig& config) { return fig2_run(config).outcome; }

RunOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::string& e = config.experiment;
  if (e == "fig2") return run_fig2(config);
  if (e == "mac-wsr") return run_mac(config);
  if (e == "bc-wsr") return run_bc(config);
  if (e == "sinr-balance") return run_balance(config);
  if (e == "ic-wsr") return run_ic(config);
  if (e == "dra") return run_dra(config);
  if (e == "diversity") return run_diversity(config);
  throw ConfigError("unknown experiment '" + e + "'");
}

}  // namespace crdra::tools
