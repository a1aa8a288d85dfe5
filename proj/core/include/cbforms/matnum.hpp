#pragma once

// Dense complex matrix numerics: Haar sampling, polar decomposition,
// operator norm and normalized trace.

#include <complex>

#include <Eigen/Dense>

#include "cbforms/rng.hpp"

namespace cbforms::matnum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

enum class PolarSide { kLeft, kRight };

enum class PolarMethod {
  kSvd,           // full singular value decomposition (default)
  kNewtonSchulz,  // inverse-free iteration; needs a well-conditioned input
};

/// M = U P (left) or M = P U (right), U unitary, P Hermitian PSD.
struct PolarFactors {
  Matrix unitary;
  Matrix psd;
  PolarSide side = PolarSide::kLeft;
};

enum class NormMethod {
  kLanczos,         // Krylov iteration on M*M with full reorthogonalization
  kPowerIteration,  // power iteration on M*M
  kDecomposition,   // dense Hermitian eigensolve of M*M
};

/// Haar-distributed N x N unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) pushed into Q.
Matrix haar_unitary(int N, const Seed& seed);

/// Haar-distributed N x N real orthogonal matrix (same construction, signs).
RealMatrix haar_orthogonal(int N, const Seed& seed);

/// Polar decomposition. Rank-deficient input is allowed: the unitary factor
/// is completed on the null space from the singular bases. Throws
/// NumericalFailure when the factors miss the 1e-10 residual targets.
PolarFactors polar(const Matrix& M, PolarSide side = PolarSide::kLeft,
                   PolarMethod method = PolarMethod::kSvd);

/// Largest singular value, relative accuracy 1e-9. Iterative methods fall
/// back to the dense decomposition when they do not converge.
double operator_norm(const Matrix& M, NormMethod method = NormMethod::kDecomposition);

/// Mean of the diagonal.
Complex normalized_trace(const Matrix& M);

/// Frobenius norm of M M* - I.
double unitarity_residual(const Matrix& M);

/// Dense, independent oracle: largest singular value from a full SVD.
double operator_norm_svd(const Matrix& M);

}  // namespace cbforms::matnum
