#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nhf {

/// Outcome of one acceptance criterion. `measured` is the worst observed
/// quantity and `threshold` its bound (measured <= threshold passes, unless
/// `detail` explains otherwise).
struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// "PASS criterion 3: <title> (measured ..., threshold ...) <detail>"
std::string format_result(const CriterionResult& r);

// Parametrized checks, used by the CLI with user-supplied values and by the
// criteria with pinned ones.

/// Refined spectrum of the truncation against the analytic ladder:
/// worst relative level error and worst gap error for each gamma.
CriterionResult check_spectrum(const std::vector<double>& gammas, int truncation, int count,
                               double tol);

/// Metric identities on the interior block: hermitization and T+ relation
/// (relative to the metric's block scale) and conjugated generators
/// against the T operators (absolute).
CriterionResult check_metric(double gamma, int truncation, double tol);

/// Fock-space algebra on the complete space of `modes` modes.
CriterionResult check_fock(double gamma, int modes, double tol);

CriterionResult criterion_spectrum();
CriterionResult criterion_seed_vectors();
CriterionResult criterion_metric();
CriterionResult criterion_fock_algebra();
CriterionResult criterion_t_operators();
CriterionResult criterion_physical_inner();
CriterionResult criterion_thermo_exact();
CriterionResult criterion_euler_maclaurin();
CriterionResult criterion_figure();
CriterionResult criterion_degenerate();

struct CriterionEntry {
  int id;
  std::function<CriterionResult()> run;
};

/// All ten criteria in order.
std::vector<CriterionEntry> acceptance_criteria();

/// Runs every criterion; exceptions become failed results.
std::vector<CriterionResult> run_acceptance();

}  // namespace nhf
