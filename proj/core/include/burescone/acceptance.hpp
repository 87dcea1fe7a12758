#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "burescone/scenarios.hpp"

namespace burescone {

struct UnknownCriterion : std::runtime_error {
  explicit UnknownCriterion(const std::string& what) : std::runtime_error(what) {}
};

/// One release-gate criterion: a named bundle of checks plus a wall-clock
/// budget. pass requires every check green and the runtime within budget.
struct CriterionRecord {
  std::string id;
  std::string name;
  std::vector<ScenarioCheck> checks;
  double runtime_seconds = 0.0;
  double budget_seconds = 0.0;
  bool pass = false;
};

/// Identifiers of the gate criteria, in run order.
std::vector<std::string> acceptance_ids();

/// Run one criterion by id. tighten > 1 probes margins: every equality
/// tolerance and upper bound shrinks by that factor, every witness lower
/// bound grows by it. 1.0 is the gate setting. Throws UnknownCriterion for
/// ids not in acceptance_ids().
CriterionRecord run_acceptance_criterion(const std::string& id, double tighten = 1.0);

/// Run every criterion in order.
std::vector<CriterionRecord> run_acceptance_suite(double tighten = 1.0);

}  // namespace burescone
