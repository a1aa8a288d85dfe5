#include "cbforms/ncpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cbforms/error.hpp"

namespace cbforms::ncpoly {
namespace {

// Sums coeff * (product of factors) over a list of monomials given in an
// order where shared prefixes are adjacent. Prefix products are reused;
// the product is always formed left to right, so reuse does not change
// a single bit of the result.
class PrefixProductAccumulator {
 public:
  // The constant goes in first, matching the commutative evaluator's order.
  PrefixProductAccumulator(int N, double constant) : sum_(constant * Matrix::Identity(N, N)) {}

  void add(const std::vector<const Matrix*>& factors, double coeff) {
    std::size_t common = 0;
    while (common < stack_.size() && common < factors.size() && keys_[common] == factors[common])
      ++common;
    stack_.resize(common);
    keys_.resize(common);
    for (std::size_t k = common; k < factors.size(); ++k) {
      if (k == 0)
        stack_.push_back(*factors[0]);
      else
        stack_.push_back(stack_.back() * *factors[k]);
      keys_.push_back(factors[k]);
    }
    sum_ += coeff * stack_.back();
  }

  Matrix take() { return std::move(sum_); }

 private:
  Matrix sum_;
  std::vector<Matrix> stack_;
  std::vector<const Matrix*> keys_;
};

}  // namespace

MatrixAssignment::MatrixAssignment(int N) : N_(N) {
  if (N < 1) throw InvalidInput("matrix assignment needs N >= 1");
}

void MatrixAssignment::set(Variable v, Matrix m) {
  if (m.rows() != N_ || m.cols() != N_) {
    std::ostringstream msg;
    msg << "assignment expects " << N_ << "x" << N_ << " matrices, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(msg.str());
  }
  matrices_[v] = std::move(m);
}

const Matrix* MatrixAssignment::find(Variable v) const {
  const auto it = matrices_.find(v);
  return it == matrices_.end() ? nullptr : &it->second;
}

bool MatrixAssignment::is_contractive(double tol) const {
  return std::all_of(matrices_.begin(), matrices_.end(), [tol](const auto& e) {
    return matnum::operator_norm(e.second) <= 1.0 + tol;
  });
}

double MatrixAssignment::max_unitarity_residual() const {
  double worst = 0.0;
  for (const auto& [v, m] : matrices_) worst = std::max(worst, matnum::unitarity_residual(m));
  return worst;
}

Matrix evaluate_form(const BlockMultilinearForm& f, const MatrixAssignment& A) {
  const int N = A.dimension();
  for (const auto& [v, m] : A.entries())
    if (v.block < 0 || v.block >= f.d() || v.index < 0 || v.index >= f.n())
      throw DimensionMismatch("assignment mentions a variable outside the form");
  PrefixProductAccumulator acc(N, f.constant());
  std::vector<const Matrix*> factors;
  for (const auto& [m, c] : f.terms()) {
    factors.clear();
    bool zero = false;
    for (int k = 0; k < m.degree(); ++k) {
      const Matrix* u = A.find(m.variable(k));
      if (u == nullptr) {
        if (!A.unassigned_is_zero()) {
          std::ostringstream msg;
          msg << "variable x_" << m.blocks[k] + 1 << "(" << m.indices[k] + 1 << ") is unassigned";
          throw InvalidInput(msg.str());
        }
        zero = true;
        break;
      }
      factors.push_back(u);
    }
    if (!zero) acc.add(factors, c);
  }
  return acc.take();
}

NCPolynomial::NCPolynomial(int num_variables, double constant)
    : t_(num_variables), constant_(constant) {
  if (num_variables < 0) throw InvalidInput("number of variables must be nonnegative");
}

void NCPolynomial::add_term(const Word& w, double coeff) {
  for (int z : w)
    if (z < 0 || z >= t_) throw InvalidInput("word letter out of range");
  if (w.empty()) {
    constant_ += coeff;
    return;
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int NCPolynomial::degree() const {
  int deg = 0;
  for (const auto& [w, c] : terms_) deg = std::max(deg, static_cast<int>(w.size()));
  return deg;
}

bool NCPolynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const std::size_t len = terms_.begin()->first.size();
  if (constant_ != 0.0) return false;
  return std::all_of(terms_.begin(), terms_.end(),
                     [len](const auto& t) { return t.first.size() == len; });
}

Matrix evaluate_nc(const NCPolynomial& p, const NCAssignment& A) {
  if (A.N < 1) throw InvalidInput("NC assignment needs N >= 1");
  for (const Matrix& m : A.values)
    if (m.size() != 0 && (m.rows() != A.N || m.cols() != A.N))
      throw DimensionMismatch("NC assignment matrix has the wrong dimension");
  PrefixProductAccumulator acc(A.N, p.constant());
  std::vector<const Matrix*> factors;
  for (const auto& [w, c] : p.terms()) {
    factors.clear();
    for (int z : w) {
      if (z >= static_cast<int>(A.values.size()) || A.values[static_cast<std::size_t>(z)].size() == 0)
        throw InvalidInput("variable z" + std::to_string(z + 1) + " is unbound");
      factors.push_back(&A.values[static_cast<std::size_t>(z)]);
    }
    acc.add(factors, c);
  }
  return acc.take();
}

double l2_norm(const NCPolynomial& p) {
  double sum = p.constant() * p.constant();
  for (const auto& [w, c] : p.terms()) sum += c * c;
  return std::sqrt(sum);
}

NCPolynomial to_nc(const BlockMultilinearForm& f) {
  NCPolynomial p(f.d() * f.n(), f.constant());
  for (const auto& [m, c] : f.terms()) {
    NCPolynomial::Word w;
    for (int k = 0; k < m.degree(); ++k) w.push_back(m.blocks[k] * f.n() + m.indices[k]);
    p.add_term(w, c);
  }
  return p;
}

SplitPolynomial split_outer_variables(const NCPolynomial& p, int m, matnum::PolarSide side) {
  if (m < 0 || m > p.num_variables()) throw InvalidInput("number of outer variables out of range");
  const int t = p.num_variables() - m;
  SplitPolynomial s{std::vector<NCPolynomial>(static_cast<std::size_t>(m), NCPolynomial(t)),
                    NCPolynomial(t, p.constant()), p.degree(), p.is_homogeneous(), side};
  const bool left = side == matnum::PolarSide::kLeft;
  for (const auto& [w, c] : p.terms()) {
    int outer = -1;
    NCPolynomial::Word rest;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const int z = w[k];
      if (z < m) {
        const bool at_edge = left ? k == 0 : k + 1 == w.size();
        if (!at_edge) throw InvalidInput("outer variable appears away from the split side");
        outer = z;
      } else {
        rest.push_back(z - m);
      }
    }
    if (outer < 0)
      s.q0.add_term(rest, c);
    else
      s.q[static_cast<std::size_t>(outer)].add_term(rest, c);
  }
  return s;
}

}  // namespace cbforms::ncpoly
