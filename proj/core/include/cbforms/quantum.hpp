#pragma once

// Quantum query algorithms with one phase query per input block:
//
//   T(x) = u^T U_1 (O_{x_1} (x) I_s) U_2 (O_{x_2} (x) I_s) ... U_d (O_{x_d} (x) I_s) v
//
// with O_x = Diag(x). All states and unitaries are real. The acceptance
// probability is T(x)^2.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cbforms/forms.hpp"
#include "cbforms/rng.hpp"

namespace cbforms::quantum {

using forms::BlockMultilinearForm;
using forms::CubePoint;

struct QuantumQueryCircuit {
  int n = 0;  // oracle dimension
  int s = 1;  // workspace multiplier
  int d = 0;  // number of queries
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::vector<Eigen::MatrixXd> unitaries;  // U_1 .. U_d, each (n s) x (n s)

  [[nodiscard]] int dim() const { return n * s; }
  /// Throws InvalidInput unless shapes match, |u| = |v| = 1 and every U_k
  /// is orthogonal to 1e-10.
  void validate() const;
};

double eval_T(const QuantumQueryCircuit& c, const CubePoint& x);

enum class ExtractionMethod {
  kAlgebraic,  // expand the product over all index tuples (fast path)
  kFourier,    // Walsh-Hadamard transform of T over the whole cube (reference)
};

inline constexpr int kDefaultFourierCap = 20;
inline constexpr std::uint64_t kDefaultAlgebraicCap = std::uint64_t{1} << 22;

/// The degree-d form T. The Fourier path enumerates 2^{nd} points and is
/// capped by n d <= fourier_cap; the algebraic path by n^d <= 2^22.
BlockMultilinearForm extract_form(const QuantumQueryCircuit& c,
                                  ExtractionMethod method = ExtractionMethod::kAlgebraic,
                                  int fourier_cap = kDefaultFourierCap);

/// The degree-(d+1) address form on n = 2^d variables per block.
/// Blocks 0..d-1 are address blocks, block d is the data block.
BlockMultilinearForm gen_address_form(int d);

/// 0-based addr(a) for a = (a_1, ..., a_d), most significant bit first.
int address_index(const std::vector<int>& bits);

/// k-fold Forrelation: U_1 = I, U_2 = ... = U_k = normalized Hadamard,
/// u = v = uniform. n must be a power of two.
QuantumQueryCircuit gen_forrelation_circuit(int n, int k = 2);

/// Haar-orthogonal U_k and Haar-random unit u, v.
QuantumQueryCircuit gen_random_circuit(int n, int s, int d, const Seed& seed);

/// Normalized n x n Sylvester-Hadamard matrix.
Eigen::MatrixXd hadamard(int n);

/// A general algorithm that queries one oracle O_z, z in {-1,+1}^m, d times:
///   u^T U_1 (O_z (x) I_s) U_2 ... U_d (O_z (x) I_s) v.
struct SingleOracleCircuit {
  int m = 0;
  int s = 1;
  int d = 0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::vector<Eigen::MatrixXd> unitaries;

  void validate() const;
};

double eval_single(const SingleOracleCircuit& c, const std::vector<int>& z);

/// Lifts to n = m + 1 with a fresh oracle per query. Each space gains one
/// extra oracle slot (times I_s) on which the unitaries act as identity, so
/// the lifted T at x_b = (z, 1) for every b equals the original value.
QuantumQueryCircuit lift_general_algorithm(const SingleOracleCircuit& c);

/// The embedding point x_b = (z, 1) for every block.
CubePoint lifted_point(const std::vector<int>& z, int d);

}  // namespace cbforms::quantum
