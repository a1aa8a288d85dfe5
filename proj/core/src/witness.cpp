#include "cbforms/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbforms/error.hpp"
#include "cbforms/quantum.hpp"

namespace cbforms::witness {
namespace {

using forms::Monomial;
using forms::Variable;
using matnum::Complex;
using ncpoly::NCPolynomial;

constexpr double kE = std::numbers::e;

Matrix identity(int N) { return Matrix::Identity(N, N); }

// Builds the NC polynomial whose first n variables are block `outer` and
// whose remaining variables are the blocks listed in `inner_blocks`, in that
// order. Terms whose leading block precedes every listed block vanish.
struct PulledPolynomial {
  NCPolynomial p;
  std::vector<int> inner_blocks;
};

int inner_id(const std::vector<int>& inner_blocks, int n, int block, int index) {
  const auto it = std::find(inner_blocks.begin(), inner_blocks.end(), block);
  return n + static_cast<int>(it - inner_blocks.begin()) * n + index;
}

ncpoly::MatrixAssignment assignment_from(const PolarWitness& w, int outer_block,
                                         const std::vector<int>& inner_blocks, int n) {
  ncpoly::MatrixAssignment A(w.report.N);
  for (int i = 0; i < n; ++i) A.set({outer_block, i}, w.outer[static_cast<std::size_t>(i)]);
  for (std::size_t k = 0; k < inner_blocks.size(); ++k)
    for (int i = 0; i < n; ++i) A.set({inner_blocks[k], i}, w.inner[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]);
  return A;
}

double root_influence_sum(const BlockMultilinearForm& f, int block) {
  double sum = 0.0;
  for (int i = 0; i < f.n(); ++i) sum += std::sqrt(forms::influence(f, {block, i}));
  return sum;
}

}  // namespace

std::string to_string(WitnessMethod m) {
  switch (m) {
    case WitnessMethod::kSignBaseline:
      return "sign-baseline";
    case WitnessMethod::kScalarPhase:
      return "scalar-phase";
    case WitnessMethod::kPolarHomogeneous:
      return "polar-homogeneous";
    case WitnessMethod::kPolarGeneral:
      return "polar-general";
  }
  return "unknown";
}

WitnessMethod witness_method_from_string(const std::string& s) {
  for (auto m : {WitnessMethod::kSignBaseline, WitnessMethod::kScalarPhase,
                 WitnessMethod::kPolarHomogeneous, WitnessMethod::kPolarGeneral})
    if (to_string(m) == s) return m;
  throw InvalidInput("unknown witness method '" + s + "'");
}

WitnessReport sign_baseline(const BlockMultilinearForm& f, int trials, const Seed& seed) {
  if (!f.is_homogeneous()) throw InvalidInput("sign baseline needs a homogeneous form");
  if (trials < 1) throw InvalidInput("sign baseline needs at least one trial");
  WitnessReport r;
  r.method = WitnessMethod::kSignBaseline;
  r.seed = seed;
  r.N = 1;
  if (f.is_zero()) {
    r.selected_block = 0;
    return r;
  }
  const int d = f.d();
  const int n = f.n();
  double best = -1.0;
  for (int b = 0; b < d; ++b) {
    Rng rng(seed.child(static_cast<std::uint64_t>(b)));
    forms::CubePoint x(d, n);
    std::vector<double> fi(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      for (int bb = 0; bb < d; ++bb)
        for (int i = 0; i < n; ++i) x.set(bb, i, bb == b ? 1 : rng.sign());
      std::fill(fi.begin(), fi.end(), 0.0);
      for (const auto& [m, c] : f.terms()) {
        int sign = 1;
        for (int k = 0; k < m.degree(); ++k)
          if (m.blocks[k] != b) sign *= x.at(m.variable(k));
        fi[static_cast<std::size_t>(m.indices[static_cast<std::size_t>(m.position_of_block(b))])] += sign * c;
      }
      // x_b(i) = sign(f_i) turns f(x) into sum_i |f_i|.
      double value = 0.0;
      for (double v : fi) value += std::abs(v);
      total += value;
    }
    const double mean = total / trials;
    if (mean > best) {
      best = mean;
      r.achieved = mean;
      r.selected_block = b;
      r.target = std::pow(2.0, -0.5 * d) * root_influence_sum(f, b);
    }
  }
  return r;
}

double scalar_phase_align_last(const BlockMultilinearForm& f,
                               const std::vector<std::vector<Complex>>& phases) {
  const int last = f.d() - 1;
  if (static_cast<int>(phases.size()) < last) throw InvalidInput("phases needed for every block but the last");
  std::vector<Complex> g(static_cast<std::size_t>(f.n()), Complex(0.0, 0.0));
  Complex rest(f.constant(), 0.0);
  for (const auto& [m, c] : f.terms()) {
    Complex prod(c, 0.0);
    int last_index = -1;
    for (int k = 0; k < m.degree(); ++k) {
      if (m.blocks[k] == last) {
        last_index = m.indices[k];
        continue;
      }
      prod *= phases[static_cast<std::size_t>(m.blocks[k])][static_cast<std::size_t>(m.indices[k])];
    }
    if (last_index < 0)
      rest += prod;
    else
      g[static_cast<std::size_t>(last_index)] += prod;
  }
  // Rotating every g_i onto the phase of the remaining part adds magnitudes.
  const Complex anchor = std::abs(rest) > 0.0 ? rest / std::abs(rest) : Complex(1.0, 0.0);
  Complex total = rest;
  for (const Complex& gi : g) {
    if (std::abs(gi) == 0.0) continue;
    const Complex x_last = std::conj(gi) / std::abs(gi) * anchor;
    total += gi * x_last;
  }
  return std::abs(total);
}

WitnessReport scalar_phase_witness_address(int d) {
  const BlockMultilinearForm f = quantum::gen_address_form(d);
  std::vector<std::vector<Complex>> phases(static_cast<std::size_t>(d),
                                           std::vector<Complex>(static_cast<std::size_t>(f.n()), Complex(1.0, 0.0)));
  for (auto& row : phases) row[1] = Complex(0.0, 1.0);
  WitnessReport r;
  r.method = WitnessMethod::kScalarPhase;
  r.N = 1;
  r.achieved = scalar_phase_align_last(f, phases);
  r.target = std::pow(2.0, 0.5 * d);
  r.selected_block = d;
  return r;
}

PolarWitness polar_witness(const ncpoly::SplitPolynomial& p, int N, const Seed& seed) {
  if (N < 1) throw InvalidInput("polar witness needs N >= 1");
  const bool left = p.side == matnum::PolarSide::kLeft;
  const int t = p.q0.num_variables();
  PolarWitness w;
  w.report.method = p.homogeneous ? WitnessMethod::kPolarHomogeneous : WitnessMethod::kPolarGeneral;
  w.report.N = N;
  w.report.seed = seed;

  ncpoly::NCAssignment inner{N, {}};
  for (int j = 0; j < t; ++j) inner.values.push_back(matnum::haar_unitary(N, seed.child(static_cast<std::uint64_t>(j))));

  Matrix M0 = Matrix::Zero(N, N);
  Matrix U0 = identity(N);
  if (!p.q0.is_zero()) {
    M0 = ncpoly::evaluate_nc(p.q0, inner);
    U0 = matnum::polar(M0, p.side).unitary;
  }

  Matrix assembled = M0;
  double norm_sum = 0.0;
  for (const NCPolynomial& q : p.q) {
    if (q.is_zero()) {
      w.outer.push_back(identity(N));
      continue;
    }
    norm_sum += ncpoly::l2_norm(q);
    const Matrix Mi = ncpoly::evaluate_nc(q, inner);
    const Matrix Ui = matnum::polar(Mi, p.side).unitary;
    if (left) {
      Matrix Vi = U0 * Ui.adjoint();
      assembled += Vi * Mi;
      w.outer.push_back(std::move(Vi));
    } else {
      Matrix Vi = Ui.adjoint() * U0;
      assembled += Mi * Vi;
      w.outer.push_back(std::move(Vi));
    }
  }

  double residual = 0.0;
  for (const Matrix& m : w.outer) residual = std::max(residual, matnum::unitarity_residual(m));
  for (const Matrix& m : inner.values) residual = std::max(residual, matnum::unitarity_residual(m));
  w.inner = std::move(inner.values);

  const double deg1 = static_cast<double>(p.degree + 1);
  w.report.achieved = matnum::operator_norm(assembled);
  w.report.target = p.homogeneous ? norm_sum / std::sqrt(kE * deg1) : norm_sum / (std::sqrt(kE) * deg1);
  w.report.unitarity_residual = residual;
  return w;
}

WitnessReport root_influence_witness(const BlockMultilinearForm& f, Side side,
                                     const std::vector<int>& schedule, const Seed& seed,
                                     ncpoly::MatrixAssignment* best_assignment) {
  if (!f.is_homogeneous()) throw InvalidInput("root-influence witness needs a homogeneous form");
  if (schedule.empty()) throw InvalidInput("empty dimension schedule");
  const int d = f.d();
  const int n = f.n();
  const int outer = side == Side::kFirst ? 0 : d - 1;

  WitnessReport best;
  best.method = WitnessMethod::kPolarHomogeneous;
  best.seed = seed;
  best.selected_block = outer;
  best.target = root_influence_sum(f, outer) / std::sqrt(kE * (d + 1));
  if (f.is_zero()) return best;

  std::vector<int> inner_blocks;
  for (int b = 0; b < d; ++b)
    if (b != outer) inner_blocks.push_back(b);

  NCPolynomial p(n + static_cast<int>(inner_blocks.size()) * n);
  for (const auto& [m, c] : f.terms()) {
    NCPolynomial::Word word;
    for (int k = 0; k < m.degree(); ++k)
      word.push_back(m.blocks[k] == outer ? m.indices[k] : inner_id(inner_blocks, n, m.blocks[k], m.indices[k]));
    p.add_term(word, c);
  }
  const auto split = ncpoly::split_outer_variables(
      p, n, side == Side::kFirst ? matnum::PolarSide::kLeft : matnum::PolarSide::kRight);

  bool first = true;
  for (int N : schedule) {
    const Seed trial_seed = seed.child(static_cast<std::uint64_t>(N));
    PolarWitness w = polar_witness(split, N, trial_seed);
    best.schedule_results.emplace_back(N, w.report.achieved);
    if (first || w.report.achieved > best.achieved) {
      first = false;
      best.achieved = w.report.achieved;
      best.N = N;
      best.unitarity_residual = w.report.unitarity_residual;
      if (best_assignment) *best_assignment = assignment_from(w, outer, inner_blocks, n);
    }
  }
  return best;
}

WitnessReport aa_witness(const BlockMultilinearForm& f, const std::vector<int>& schedule,
                         const Seed& seed, ncpoly::MatrixAssignment* best_assignment) {
  if (schedule.empty()) throw InvalidInput("empty dimension schedule");
  const int d = f.d();
  const int n = f.n();
  WitnessReport best;
  best.method = WitnessMethod::kPolarGeneral;
  best.seed = seed;

  const double var = forms::variance(f);
  if (var == 0.0) {
    // Constant form: every unitary assignment gives (E f) I.
    best.achieved = std::abs(f.constant());
    best.N = 1;
    best.target = 0.0;
    if (best_assignment) *best_assignment = ncpoly::MatrixAssignment(1);
    return best;
  }

  const auto parts = forms::leading_block_decomposition(f);
  int beta = 0;
  for (int b = 1; b < d; ++b)
    if (forms::variance(parts[static_cast<std::size_t>(b)]) > forms::variance(parts[static_cast<std::size_t>(beta)])) beta = b;
  best.selected_block = beta;
  best.target = var / (std::sqrt(kE) * std::pow(d + 1.0, 2) * std::sqrt(forms::max_influence(f).value));

  std::vector<int> inner_blocks;
  for (int b = beta + 1; b < d; ++b) inner_blocks.push_back(b);

  // Blocks before beta are zero matrices, which removes every f_b, b < beta.
  NCPolynomial p(n + static_cast<int>(inner_blocks.size()) * n, f.constant());
  for (const auto& [m, c] : f.terms()) {
    if (m.blocks.front() < beta) continue;
    NCPolynomial::Word word;
    for (int k = 0; k < m.degree(); ++k)
      word.push_back(m.blocks[k] == beta ? m.indices[k] : inner_id(inner_blocks, n, m.blocks[k], m.indices[k]));
    p.add_term(word, c);
  }
  auto split = ncpoly::split_outer_variables(p, n, matnum::PolarSide::kLeft);
  split.degree = d;
  split.homogeneous = false;

  bool first = true;
  for (int N : schedule) {
    PolarWitness w = polar_witness(split, N, seed.child(static_cast<std::uint64_t>(N)));
    best.schedule_results.emplace_back(N, w.report.achieved);
    if (first || w.report.achieved > best.achieved) {
      first = false;
      best.achieved = w.report.achieved;
      best.N = N;
      best.unitarity_residual = w.report.unitarity_residual;
      if (best_assignment) {
        *best_assignment = assignment_from(w, beta, inner_blocks, n);
        best_assignment->allow_unassigned_zero(true);
      }
    }
  }
  return best;
}

double aa_influence_bound(const BlockMultilinearForm& f) {
  const double var = forms::variance(f);
  return var * var / (kE * std::pow(f.d() + 1.0, 4));
}

bool aa_inequality_holds(const BlockMultilinearForm& f) {
  return forms::max_influence(f).value >= aa_influence_bound(f);
}

}  // namespace cbforms::witness
