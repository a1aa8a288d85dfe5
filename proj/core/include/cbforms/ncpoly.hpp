#pragma once

// Non-commutative evaluation: block-multilinear forms at matrix points and
// generic polynomials in non-commuting variables z_0, ..., z_{t-1}.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cbforms/forms.hpp"
#include "cbforms/matnum.hpp"

namespace cbforms::ncpoly {

using forms::BlockMultilinearForm;
using forms::Variable;
using matnum::Matrix;

/// Per-variable N x N matrices substituted for the x_b(i).
class MatrixAssignment {
 public:
  explicit MatrixAssignment(int N);

  [[nodiscard]] int dimension() const { return N_; }
  void set(Variable v, Matrix m);
  [[nodiscard]] const Matrix* find(Variable v) const;
  [[nodiscard]] const std::map<Variable, Matrix>& entries() const { return matrices_; }

  /// Unassigned variables read as the zero matrix only when allowed.
  void allow_unassigned_zero(bool allow) { zero_default_ = allow; }
  [[nodiscard]] bool unassigned_is_zero() const { return zero_default_; }

  /// Every assigned matrix has operator norm at most 1 + tol.
  [[nodiscard]] bool is_contractive(double tol = 1e-9) const;
  /// Largest unitarity residual among assigned matrices (0 when empty).
  [[nodiscard]] double max_unitarity_residual() const;

 private:
  int N_;
  bool zero_default_ = false;
  std::map<Variable, Matrix> matrices_;
};

/// E f * I + sum of coefficient * U_{b_1}(i_1) ... U_{b_m}(i_m), factors in
/// increasing block order.
Matrix evaluate_form(const BlockMultilinearForm& f, const MatrixAssignment& A);

/// Non-commutative polynomial sum_w c_w z_w + c_0 over t variables.
/// Words are nonempty; the constant plays the role of the empty word.
class NCPolynomial {
 public:
  using Word = std::vector<int>;

  explicit NCPolynomial(int num_variables, double constant = 0.0);

  [[nodiscard]] int num_variables() const { return t_; }
  [[nodiscard]] double constant() const { return constant_; }
  [[nodiscard]] const std::map<Word, double>& terms() const { return terms_; }

  void set_constant(double c) { constant_ = c; }
  /// Accumulates; exact zeros are erased. An empty word adds to the constant.
  void add_term(const Word& w, double coeff);

  /// Longest word length (0 for constants).
  [[nodiscard]] int degree() const;
  /// All words share one length and, if that length is positive, c_0 = 0.
  [[nodiscard]] bool is_homogeneous() const;
  [[nodiscard]] bool is_zero() const { return constant_ == 0.0 && terms_.empty(); }

  friend bool operator==(const NCPolynomial&, const NCPolynomial&) = default;

 private:
  int t_;
  double constant_;
  std::map<Word, double> terms_;
};

/// Matrices bound to the variables of an NCPolynomial. An empty (0 x 0)
/// entry means the variable is unbound.
struct NCAssignment {
  int N = 0;
  std::vector<Matrix> values;
};

/// Ordered product-sum; the constant scales the identity. Throws
/// InvalidInput when a variable used by p is unbound.
Matrix evaluate_nc(const NCPolynomial& p, const NCAssignment& A);

/// (sum of squared coefficients, constant included)^(1/2).
double l2_norm(const NCPolynomial& p);

/// The form as an NCPolynomial with variable x_b(i) numbered b * n + i.
NCPolynomial to_nc(const BlockMultilinearForm& f);

/// p = sum_i y_i q_i + q_0 (left) or sum_i q_i y_i + q_0 (right).
struct SplitPolynomial {
  std::vector<NCPolynomial> q;  // q_1 .. q_m (index 0 here is q_1)
  NCPolynomial q0;
  int degree = 0;              // total degree of p
  bool homogeneous = false;    // p itself is homogeneous
  matnum::PolarSide side = matnum::PolarSide::kLeft;
};

/// Splits a polynomial whose first m variables are the y's. The y's may
/// only appear as the leading (left side) or trailing (right side) letter,
/// and at most once per word. The q's are over the remaining t - m
/// variables, renumbered from 0.
SplitPolynomial split_outer_variables(const NCPolynomial& p, int m,
                                      matnum::PolarSide side = matnum::PolarSide::kLeft);

}  // namespace cbforms::ncpoly
