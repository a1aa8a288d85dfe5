#pragma once

// Block-multilinear forms on {-1,+1}^{n x d} and their commutative Fourier
// analytics: evaluation, variance, influences, restrictions, sup norm.
//
// Blocks and indices are 0-based in the C++ API. The JSON format (io.hpp)
// and the CLI present them 1-based.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cbforms/rng.hpp"

namespace cbforms::forms {

/// The variable x_block(index).
struct Variable {
  int block = 0;
  int index = 0;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// A monomial x_{b_1}(i_1) ... x_{b_m}(i_m) with b_1 < ... < b_m.
/// Ordering is lexicographic on (blocks, indices), the canonical term order.
struct Monomial {
  std::vector<int> blocks;
  std::vector<int> indices;

  Monomial() = default;
  Monomial(std::vector<int> b, std::vector<int> i)
      : blocks(std::move(b)), indices(std::move(i)) {}
  explicit Monomial(std::span<const Variable> vars);

  [[nodiscard]] int degree() const { return static_cast<int>(blocks.size()); }
  [[nodiscard]] Variable variable(int k) const { return {blocks[k], indices[k]}; }
  [[nodiscard]] bool contains(Variable v) const;
  /// Position of block b inside the monomial, or -1.
  [[nodiscard]] int position_of_block(int b) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// A point of {-1,+1}^{n x d}, stored block-major.
class CubePoint {
 public:
  CubePoint(int d, int n, int fill = 1);
  /// Point whose bit (b * n + i) of `mask` being set means x_b(i) = -1.
  static CubePoint from_mask(int d, int n, std::uint64_t mask);

  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int at(int b, int i) const { return values_[static_cast<std::size_t>(b * n_ + i)]; }
  [[nodiscard]] int at(Variable v) const { return at(v.block, v.index); }
  void set(int b, int i, int value);
  void set(Variable v, int value) { set(v.block, v.index, value); }

 private:
  int d_;
  int n_;
  std::vector<int> values_;
};

/// Partial assignment of variables to +1/-1.
using Restriction = std::map<Variable, int>;

/// Real degree-d block-multilinear form over d blocks of n variables.
///
/// Terms are kept sparse; a coefficient that becomes exactly 0.0 is erased,
/// so no stored coefficient is zero.
class BlockMultilinearForm {
 public:
  using TermMap = std::map<Monomial, double>;

  BlockMultilinearForm(int d, int n, double constant = 0.0);

  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double constant() const { return constant_; }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] double coefficient(const Monomial& m) const;

  void set_constant(double c) { constant_ = c; }
  /// Adds `coeff` to the coefficient of `m`. The empty monomial adds to the
  /// constant. Throws InvalidInput when `m` is not block-multilinear here.
  void add_term(const Monomial& m, double coeff);

  /// Largest degree among stored terms (0 for a constant form).
  [[nodiscard]] int degree() const;
  /// Every term uses one variable from every block and the constant is 0.
  [[nodiscard]] bool is_homogeneous() const;
  [[nodiscard]] bool is_zero() const { return constant_ == 0.0 && terms_.empty(); }

  BlockMultilinearForm& operator+=(const BlockMultilinearForm& other);
  BlockMultilinearForm& operator-=(const BlockMultilinearForm& other);
  BlockMultilinearForm& operator*=(double s);
  friend BlockMultilinearForm operator+(BlockMultilinearForm a, const BlockMultilinearForm& b) {
    return a += b;
  }
  friend BlockMultilinearForm operator-(BlockMultilinearForm a, const BlockMultilinearForm& b) {
    return a -= b;
  }
  friend BlockMultilinearForm operator*(double s, BlockMultilinearForm a) { return a *= s; }

  friend bool operator==(const BlockMultilinearForm&, const BlockMultilinearForm&) = default;

 private:
  void validate(const Monomial& m) const;

  int d_;
  int n_;
  double constant_;
  TermMap terms_;
};

/// constant + sum of coefficient * product of point entries.
double evaluate(const BlockMultilinearForm& f, const CubePoint& x);

/// Sum of squared non-constant coefficients.
double variance(const BlockMultilinearForm& f);

/// Sum of squared coefficients of the monomials containing v.
double influence(const BlockMultilinearForm& f, Variable v);

/// influence_table(f)[b][i] = Inf_{b,i}(f).
std::vector<std::vector<double>> influence_table(const BlockMultilinearForm& f);

struct MaxInfluence {
  Variable variable;
  double value = 0.0;
};

/// Argmax over all variables; ties go to the lowest block, then index.
MaxInfluence max_influence(const BlockMultilinearForm& f);

/// sum_i Inf_{b,i}(f). Never exceeds the variance; equal to it for every
/// block when f is homogeneous.
double sum_block_influence(const BlockMultilinearForm& f, int b);

/// Fixes the variables of r. The result no longer mentions them.
BlockMultilinearForm restrict(const BlockMultilinearForm& f, const Restriction& r);

/// Variables that occur in at least one term, in canonical order.
std::vector<Variable> relevant_variables(const BlockMultilinearForm& f);

/// Exact max |f(x)| over the cube. Only variables occurring in f are
/// enumerated, so the cap bounds their count (default 24).
double sup_norm_bruteforce(const BlockMultilinearForm& f, int cap = 24);

/// Keeps exactly the degree-k terms (k = 0 keeps only the constant).
BlockMultilinearForm homogeneous_part(const BlockMultilinearForm& f, int k);

/// f_b collects the terms whose first variable lies in block b, so that
/// f = E f + sum_b f_b and Var[f] = sum_b Var[f_b].
std::vector<BlockMultilinearForm> leading_block_decomposition(const BlockMultilinearForm& f);

/// Random sparse form: `num_terms` distinct monomials with standard normal
/// coefficients. Homogeneous forms use every block in each monomial.
BlockMultilinearForm random_form(int d, int n, int num_terms, bool homogeneous, const Seed& seed);

}  // namespace cbforms::forms
