#include <doctest.h>

#include <cmath>

#include "cbforms/matnum.hpp"
#include "oracles.hpp"

using namespace cbforms;
using namespace cbforms::matnum;

namespace {

Matrix ginibre(int N, const Seed& seed) {
  Rng rng(seed);
  Matrix M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = Complex(rng.normal(), rng.normal());
  return M;
}

double hermitian_defect(const Matrix& P) { return (P - P.adjoint()).norm(); }

double min_eigenvalue(const Matrix& P) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P + P.adjoint()));
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("Haar unitaries are unitary and reproducible") {
  const Matrix u1 = haar_unitary(1, Seed(3));
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) <= 1e-15);
  const Matrix U = haar_unitary(64, Seed(4));
  CHECK(unitarity_residual(U) <= 1e-12);
  CHECK(U == haar_unitary(64, Seed(4)));
  CHECK_FALSE(U == haar_unitary(64, Seed(5)));
  const RealMatrix O = haar_orthogonal(16, Seed(4));
  CHECK((O * O.transpose() - RealMatrix::Identity(16, 16)).norm() <= 1e-12);
}

TEST_CASE("Haar trace statistics") {
  // E tr_N(U) = 0 with standard error 1/(N sqrt(samples)).
  const int N = 64;
  const int samples = 10000;
  Complex mean(0.0, 0.0);
  for (int s = 0; s < samples; ++s) mean += normalized_trace(haar_unitary(N, Seed(11).child(s)));
  mean /= double(samples);
  const double se = 1.0 / (N * std::sqrt(double(samples)));
  CHECK(std::abs(mean.real()) <= 3 * se * std::sqrt(2.0));
  CHECK(std::abs(mean.imag()) <= 3 * se * std::sqrt(2.0));
}

TEST_CASE("left translation leaves power-trace moments unchanged") {
  // For Haar U on U(N), E|tr U^k|^2 = min(k, N). Compare U and V U.
  const int N = 6;
  const int samples = 10000;
  const Matrix V = haar_unitary(N, Seed(99));
  for (int k = 1; k <= 3; ++k) {
    double a = 0.0;
    double b = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Matrix U = haar_unitary(N, Seed(12).child(s));
      Matrix Uk = Matrix::Identity(N, N);
      Matrix Wk = Matrix::Identity(N, N);
      const Matrix W = V * U;
      for (int p = 0; p < k; ++p) {
        Uk = Uk * U;
        Wk = Wk * W;
      }
      const double x = std::norm(Uk.trace());
      const double y = std::norm(Wk.trace());
      a += x;
      b += y;
      a2 += x * x;
      b2 += y * y;
    }
    a /= samples;
    b /= samples;
    const double sa = std::sqrt((a2 / samples - a * a) / samples);
    const double sb = std::sqrt((b2 / samples - b * b) / samples);
    CHECK(std::abs(a - double(k)) <= 4 * sa);
    CHECK(std::abs(b - double(k)) <= 4 * sb);
    CHECK(std::abs(a - b) <= 4 * std::hypot(sa, sb));
  }
}

TEST_CASE("polar of special matrices") {
  const Matrix U = haar_unitary(8, Seed(1));
  const auto pu = polar(U);
  CHECK((pu.unitary - U).norm() <= 1e-10);
  CHECK((pu.psd - Matrix::Identity(8, 8)).norm() <= 1e-10);

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 2.0;
  const auto pd = polar(D);
  CHECK((pd.unitary - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK((pd.psd - D).norm() <= 1e-12);
  const auto pz = polar(Matrix(Matrix::Zero(3, 3)));
  CHECK(unitarity_residual(pz.unitary) <= 1e-12);
  CHECK(pz.psd.norm() == 0.0);
}

TEST_CASE("polar factors of random matrices") {
  for (int N : {1, 5, 32, 40}) {
    const Matrix M = ginibre(N, Seed(20).child(N));
    for (auto side : {PolarSide::kLeft, PolarSide::kRight}) {
      const auto f = polar(M, side);
      const Matrix R = side == PolarSide::kLeft ? Matrix(f.unitary * f.psd) : Matrix(f.psd * f.unitary);
      CHECK((R - M).norm() <= 1e-10 * M.norm());
      CHECK(unitarity_residual(f.unitary) <= 1e-10);
      CHECK(hermitian_defect(f.psd) <= 1e-10);
      CHECK(min_eigenvalue(f.psd) >= -1e-10);
    }
  }
}

TEST_CASE("rank-deficient polar still yields a unitary") {
  Matrix M = ginibre(10, Seed(21));
  M.col(3).setZero();
  M.col(7) = M.col(1);
  const auto f = polar(M);
  CHECK(unitarity_residual(f.unitary) <= 1e-10);
  CHECK((f.unitary * f.psd - M).norm() <= 1e-10 * M.norm());
}

TEST_CASE("left multiplication by a unitary keeps the left psd factor") {
  const Matrix M = ginibre(24, Seed(22));
  const Matrix V = haar_unitary(24, Seed(23));
  CHECK((polar(Matrix(V * M)).psd - polar(M).psd).norm() <= 1e-9);
}

TEST_CASE("Newton-Schulz backend agrees with the SVD path") {
  const Matrix M = haar_unitary(16, Seed(24)) * (Matrix::Identity(16, 16) * 2.0 + 0.3 * ginibre(16, Seed(25)));
  for (auto side : {PolarSide::kLeft, PolarSide::kRight}) {
    const auto a = polar(M, side, PolarMethod::kSvd);
    const auto b = polar(M, side, PolarMethod::kNewtonSchulz);
    CHECK((a.unitary - b.unitary).norm() <= 1e-9);
    CHECK((a.psd - b.psd).norm() <= 1e-9);
  }
}

TEST_CASE("operator norm and trace of simple matrices") {
  for (int N : {1, 3, 17}) {
    const Matrix I = Matrix::Identity(N, N);
    CHECK(std::abs(operator_norm(I) - 1.0) <= 1e-12);
    CHECK(std::abs(normalized_trace(I) - Complex(1.0, 0.0)) <= 1e-15);
  }
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = -1.0;
  for (auto method : {NormMethod::kLanczos, NormMethod::kPowerIteration, NormMethod::kDecomposition})
    CHECK(std::abs(operator_norm(D, method) - 3.0) <= 1e-12);
  CHECK(std::abs(normalized_trace(D) - Complex(1.0, 0.0)) <= 1e-15);
  CHECK(operator_norm(Matrix::Zero(4, 4)) == 0.0);
}

TEST_CASE("iterative norms match the full decomposition") {
  for (int s = 0; s < 10; ++s) {
    const Matrix M = ginibre(16, Seed(30).child(s));
    const double ref = oracle::spectral_norm(M);
    CHECK(std::abs(operator_norm_svd(M) - ref) <= 1e-12 * ref);
    for (auto method : {NormMethod::kLanczos, NormMethod::kPowerIteration, NormMethod::kDecomposition})
      CHECK(std::abs(operator_norm(M, method) - ref) <= 1e-9 * ref);
  }
  // Larger case with a clustered top of the spectrum.
  const Matrix U = haar_unitary(200, Seed(31));
  const Matrix M = U + 0.01 * ginibre(200, Seed(32));
  CHECK(std::abs(operator_norm(M) - oracle::spectral_norm(M)) <= 1e-9 * oracle::spectral_norm(M));
}

TEST_CASE("operator norm is unitarily invariant and submultiplicative") {
  for (int s = 0; s < 5; ++s) {
    const Matrix A = ginibre(20, Seed(40).child(s));
    const Matrix B = ginibre(20, Seed(41).child(s));
    const Matrix V = haar_unitary(20, Seed(42).child(s));
    CHECK(std::abs(operator_norm(V * A) - operator_norm(A)) <= 1e-10 * operator_norm(A));
    CHECK(std::abs(operator_norm(A * V) - operator_norm(A)) <= 1e-10 * operator_norm(A));
    CHECK(operator_norm(A * B) <= operator_norm(A) * operator_norm(B) * (1 + 1e-10));
  }
}
