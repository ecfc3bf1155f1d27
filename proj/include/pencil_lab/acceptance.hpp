#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pencil_lab {

enum class Tier { kFull, kQuick };

/// Tolerances of one tier. The full tier pins the reference thresholds; the
/// quick tier uses smaller sizes and loosens the convergence-limited ones.
struct AcceptanceTolerances {
  double ratio_slack = 1e-3;          // rank-2 and weighted ratios
  double derivative_identity = 1e-4;
  double inequality_slack = 1e-3;     // trick and Cauchy-Schwarz inequalities
  double pencil_residual_1d = 1e-6;
  double pencil_residual_2d = 1e-4;
  double direct_residual = 1e-4;
  double tail_fraction = 1e-6;
  double harmonic_a2 = 1e-6;
  double exact_identity = 1e-8;
  double isospectral = 1e-12;
  double fixed_basis = 1e-3;
  double verdict_factor = 5.0;
};

AcceptanceTolerances tolerances_for(Tier tier);

struct AcceptanceOptions {
  Tier tier = Tier::kFull;
  bool slow = false;           // adds the non-gating three-dimensional rank-4 run
  std::vector<int> only;       // criterion ids to run; empty = all
  std::ostream* log = nullptr; // pass/fail lines are streamed here as they finish
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  bool passed = false;
  bool gating = true;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::vector<std::string> details;
};

inline constexpr int kCriterionCount = 10;

CriterionOutcome run_criterion(int id, const AcceptanceOptions& options);

/// Runs the selected criteria in order.
std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& options);

/// "PASS  3  rank-3 ... (12.1 s)" plus indented detail lines.
void print_outcome(std::ostream& os, const CriterionOutcome& outcome);

bool all_passed(const std::vector<CriterionOutcome>& outcomes);

}  // namespace pencil_lab
