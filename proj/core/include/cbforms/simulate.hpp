#pragma once

// Greedy classical approximation: query the most influential variable,
// restrict, and stop once the restricted variance is small; the output is
// the expectation of the restricted form.

#include <cstdint>
#include <utility>
#include <vector>

#include "cbforms/forms.hpp"

namespace cbforms::simulate {

using forms::BlockMultilinearForm;
using forms::CubePoint;
using forms::Variable;

struct SimulationPolicy {
  double epsilon = 0.1;
  double delta = 0.1;
  /// Stop once Var <= variance_threshold. Defaults to epsilon^2 * delta:
  /// by Chebyshev the expectation is then epsilon-close to f on at least a
  /// 1 - delta fraction of inputs.
  double variance_threshold = 0.001;
  int query_budget = 16;

  /// Policy with the Chebyshev threshold epsilon^2 * delta.
  static SimulationPolicy chebyshev(double epsilon, double delta, int budget);
  void validate() const;
};

struct QueryRecord {
  Variable variable;
  int observed = 1;
  double variance_before = 0.0;  // variance of the form that was queried
};

struct SimulationTranscript {
  std::vector<QueryRecord> queries;
  double output = 0.0;
  int queries_used = 0;
  double final_variance = 0.0;
  bool budget_exhausted = false;
};

/// Runs the greedy tree on input x. Deterministic given (f, policy, x).
SimulationTranscript simulate_on_input(const BlockMultilinearForm& f, const SimulationPolicy& policy,
                                       const CubePoint& x);

struct ErrorProfile {
  /// Distinct values of |output - f(x)| with their input counts, ascending.
  std::vector<std::pair<double, std::uint64_t>> histogram;
  std::uint64_t inputs = 0;
  /// Fraction of inputs with error > epsilon.
  double failing_fraction = 0.0;
  double mean_queries = 0.0;
  double max_error = 0.0;
  /// Fraction of inputs on which the tree stopped by exhausting its budget.
  double budget_exhausted_fraction = 0.0;

  /// (eps', delta') pairs: for each histogram value e, the fraction of
  /// inputs whose error exceeds e.
  [[nodiscard]] std::vector<std::pair<double, double>> frontier() const;
};

inline constexpr int kDefaultProfileCap = 20;

/// Exact error distribution over all 2^{nd} inputs. The decision tree is
/// built once and memoized, which agrees with simulate_on_input per input.
ErrorProfile error_profile(const BlockMultilinearForm& f, const SimulationPolicy& policy,
                           int cap = kDefaultProfileCap);

/// d^5 eps^-8 delta^-5, the asymptotic query count used as a reference line.
double reference_query_bound(int d, double epsilon, double delta);

struct BudgetRow {
  int budget = 0;
  double epsilon = 0.0;
  double achieved_failing_fraction = 0.0;
  double mean_queries = 0.0;
};

/// One error profile per budget, other policy fields fixed.
std::vector<BudgetRow> budget_sweep(const BlockMultilinearForm& f, SimulationPolicy policy,
                                    const std::vector<int>& budgets, int cap = kDefaultProfileCap);

}  // namespace cbforms::simulate
