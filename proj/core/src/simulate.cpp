#include "cbforms/simulate.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "cbforms/error.hpp"

namespace cbforms::simulate {
namespace {

struct Node {
  BlockMultilinearForm form;
  bool leaf = false;
  bool budget_exhausted = false;
  Variable variable;
  std::unique_ptr<Node> plus;
  std::unique_ptr<Node> minus;
};

// The greedy step shared by the per-input and the memoized paths: returns
// true when `g` should be answered by its expectation.
bool should_stop(const BlockMultilinearForm& g, const SimulationPolicy& policy, int used, bool& by_budget) {
  if (variance(g) <= policy.variance_threshold) return true;
  if (used >= policy.query_budget) {
    by_budget = true;
    return true;
  }
  // A positive variance guarantees a variable with positive influence.
  return false;
}

std::unique_ptr<Node> build(const BlockMultilinearForm& g, const SimulationPolicy& policy, int used) {
  auto node = std::make_unique<Node>(Node{g, false, false, {}, nullptr, nullptr});
  bool by_budget = false;
  if (should_stop(g, policy, used, by_budget)) {
    node->leaf = true;
    node->budget_exhausted = by_budget;
    return node;
  }
  node->variable = forms::max_influence(g).variable;
  node->plus = build(forms::restrict(g, {{node->variable, 1}}), policy, used + 1);
  node->minus = build(forms::restrict(g, {{node->variable, -1}}), policy, used + 1);
  return node;
}

}  // namespace

SimulationPolicy SimulationPolicy::chebyshev(double epsilon, double delta, int budget) {
  SimulationPolicy p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.variance_threshold = epsilon * epsilon * delta;
  p.query_budget = budget;
  p.validate();
  return p;
}

void SimulationPolicy::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in (0, 1]");
  if (!(variance_threshold > 0.0)) throw InvalidInput("variance threshold must be positive");
  if (query_budget < 1) throw InvalidInput("query budget must be positive");
}

SimulationTranscript simulate_on_input(const BlockMultilinearForm& f, const SimulationPolicy& policy,
                                       const CubePoint& x) {
  policy.validate();
  if (x.d() != f.d() || x.n() != f.n()) throw DimensionMismatch("input point does not match the form");
  SimulationTranscript t;
  BlockMultilinearForm g = f;
  while (true) {
    bool by_budget = false;
    if (should_stop(g, policy, t.queries_used, by_budget)) {
      t.budget_exhausted = by_budget;
      break;
    }
    const Variable v = forms::max_influence(g).variable;
    const int observed = x.at(v);
    t.queries.push_back({v, observed, variance(g)});
    g = forms::restrict(g, {{v, observed}});
    ++t.queries_used;
  }
  t.output = g.constant();
  t.final_variance = variance(g);
  return t;
}

std::vector<std::pair<double, double>> ErrorProfile::frontier() const {
  std::vector<std::pair<double, double>> out;
  std::uint64_t above = inputs;
  for (const auto& [err, count] : histogram) {
    above -= count;
    out.emplace_back(err, inputs == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(inputs));
  }
  return out;
}

ErrorProfile error_profile(const BlockMultilinearForm& f, const SimulationPolicy& policy, int cap) {
  policy.validate();
  const int bits = f.n() * f.d();
  if (bits > cap || bits > 40) {
    std::ostringstream msg;
    msg << "error profile over 2^" << bits << " inputs exceeds cap n*d <= " << cap;
    throw CapExceeded(msg.str());
  }
  const auto root = build(f, policy, 0);
  std::map<double, std::uint64_t> hist;
  ErrorProfile prof;
  const std::uint64_t size = std::uint64_t{1} << bits;
  std::uint64_t failing = 0;
  std::uint64_t exhausted = 0;
  std::uint64_t total_queries = 0;
  for (std::uint64_t mask = 0; mask < size; ++mask) {
    const CubePoint x = CubePoint::from_mask(f.d(), f.n(), mask);
    const Node* node = root.get();
    int used = 0;
    while (!node->leaf) {
      node = x.at(node->variable) > 0 ? node->plus.get() : node->minus.get();
      ++used;
    }
    const double err = std::abs(node->form.constant() - forms::evaluate(f, x));
    ++hist[err];
    if (err > policy.epsilon) ++failing;
    if (node->budget_exhausted) ++exhausted;
    total_queries += static_cast<std::uint64_t>(used);
    prof.max_error = std::max(prof.max_error, err);
  }
  prof.histogram.assign(hist.begin(), hist.end());
  prof.inputs = size;
  prof.failing_fraction = static_cast<double>(failing) / static_cast<double>(size);
  prof.mean_queries = static_cast<double>(total_queries) / static_cast<double>(size);
  prof.budget_exhausted_fraction = static_cast<double>(exhausted) / static_cast<double>(size);
  return prof;
}

double reference_query_bound(int d, double epsilon, double delta) {
  return std::pow(double(d), 5) * std::pow(epsilon, -8) * std::pow(delta, -5);
}

std::vector<BudgetRow> budget_sweep(const BlockMultilinearForm& f, SimulationPolicy policy,
                                    const std::vector<int>& budgets, int cap) {
  std::vector<BudgetRow> rows;
  for (int b : budgets) {
    policy.query_budget = b;
    const ErrorProfile p = error_profile(f, policy, cap);
    rows.push_back({b, policy.epsilon, p.failing_fraction, p.mean_queries});
  }
  return rows;
}

}  // namespace cbforms::simulate
