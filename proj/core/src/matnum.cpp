#include "cbforms/matnum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cbforms/error.hpp"

namespace cbforms::matnum {
namespace {

constexpr double kPolarTolerance = 1e-10;

Matrix ginibre(int N, Rng& rng) {
  Matrix Z(N, N);
  const double scale = 1.0 / std::numbers::sqrt2;
  // Column-major fill order fixes the stream layout.
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      Z(i, j) = Complex(re * scale, im * scale);
    }
  return Z;
}

void check_square(const Matrix& M, const char* what) {
  if (M.rows() != M.cols()) throw DimensionMismatch(std::string(what) + " needs a square matrix");
  if (!M.allFinite()) throw InvalidInput(std::string(what) + " got non-finite entries");
}

double hermitian_defect(const Matrix& P) { return (P - P.adjoint()).norm(); }

void verify_polar(const Matrix& M, const PolarFactors& f) {
  const double scale = std::max(M.norm(), 1.0);
  const Matrix recon = f.side == PolarSide::kLeft ? Matrix(f.unitary * f.psd) : Matrix(f.psd * f.unitary);
  const double recon_err = (recon - M).norm() / scale;
  const double unit_err = unitarity_residual(f.unitary);
  const double herm_err = hermitian_defect(f.psd) / scale;
  if (recon_err > kPolarTolerance || unit_err > kPolarTolerance || herm_err > kPolarTolerance)
    throw NumericalFailure("polar decomposition residuals above 1e-10");
  if (M.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (f.psd + f.psd.adjoint())),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPolarTolerance * scale)
      throw NumericalFailure("polar factor is not positive semidefinite");
  }
}

PolarFactors polar_svd(const Matrix& M, PolarSide side) {
  const int N = static_cast<int>(M.rows());
  Matrix W, V;
  Eigen::VectorXd sigma;
  if (N <= 16) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    W = svd.matrixU();
    V = svd.matrixV();
    sigma = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    W = svd.matrixU();
    V = svd.matrixV();
    sigma = svd.singularValues();
  }
  PolarFactors f;
  f.side = side;
  f.unitary = W * V.adjoint();
  if (side == PolarSide::kLeft)
    f.psd = V * sigma.cast<Complex>().asDiagonal() * V.adjoint();
  else
    f.psd = W * sigma.cast<Complex>().asDiagonal() * W.adjoint();
  f.psd = 0.5 * (f.psd + f.psd.adjoint());
  return f;
}

PolarFactors polar_newton_schulz(const Matrix& M, PolarSide side) {
  const int N = static_cast<int>(M.rows());
  const double frob = M.norm();
  if (frob == 0.0) throw NumericalFailure("Newton-Schulz polar iteration needs a nonzero matrix");
  // Scaling by the Frobenius norm puts every singular value in (0, 1].
  Matrix X = M / frob;
  const Matrix I = Matrix::Identity(N, N);
  for (int iter = 0; iter < 200; ++iter) {
    const Matrix XtX = X.adjoint() * X;
    if ((XtX - I).norm() < 1e-14 * std::sqrt(double(N))) break;
    X = 0.5 * X * (3.0 * I - XtX);
  }
  PolarFactors f;
  f.side = side;
  f.unitary = X;
  f.psd = side == PolarSide::kLeft ? Matrix(X.adjoint() * M) : Matrix(M * X.adjoint());
  f.psd = 0.5 * (f.psd + f.psd.adjoint());
  return f;
}

double norm_decomposition(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  const Matrix G = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Vector start_vector(int N) {
  // Deterministic, generic start so no eigenvector is missed by symmetry.
  Rng rng(Seed(0x6e6f726d, {static_cast<std::uint64_t>(N)}));
  Vector v(N);
  for (int i = 0; i < N; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v.normalized();
}

// Returns a negative value when the iteration did not converge.
double norm_power_iteration(const Matrix& M) {
  const int N = static_cast<int>(M.rows());
  Vector v = start_vector(N);
  double previous = -1.0;
  const int cap = 10 * N;
  for (int iter = 0; iter < cap; ++iter) {
    Vector w = M.adjoint() * (M * v);
    const double rayleigh = v.dot(w).real();
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (previous >= 0.0 && std::abs(rayleigh - previous) <= 1e-12 * std::max(rayleigh, 1e-300))
      return std::sqrt(std::max(rayleigh, 0.0));
    previous = rayleigh;
  }
  return -1.0;
}

// Lanczos on G = M*M. The top Ritz value never exceeds the true top
// eigenvalue and is accepted once its residual bound is below 1e-11
// relative, which gives 1e-9 relative accuracy on the norm with margin.
double norm_lanczos(const Matrix& M) {
  const int N = static_cast<int>(M.rows());
  const int max_steps = std::min(N, 10 * N > 600 ? 600 : 10 * N);
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(max_steps));
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.push_back(start_vector(N));
  for (int k = 0; k < max_steps; ++k) {
    Vector w = M.adjoint() * (M * basis.back());
    const double a = basis.back().dot(w).real();
    alpha.push_back(a);
    // Two passes of full reorthogonalization.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : basis) w -= q * q.dot(w);
    const double b = w.norm();

    const int m = static_cast<int>(alpha.size());
    const bool check = (m % 4 == 0) || b == 0.0 || m == max_steps;
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub(std::max(m - 1, 0));
      for (int i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = es.eigenvalues()(m - 1);
      const double residual = std::abs(b * es.eigenvectors()(m - 1, m - 1));
      if (theta <= 0.0 && b == 0.0) return 0.0;
      if (b == 0.0 || residual <= 1e-11 * std::max(theta, 1e-300))
        return std::sqrt(std::max(theta, 0.0));
    }
    if (b == 0.0) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return -1.0;
}

}  // namespace

Matrix haar_unitary(int N, const Seed& seed) {
  if (N < 1) throw InvalidInput("Haar unitary needs N >= 1");
  Rng rng(seed);
  const Matrix Z = ginibre(N, rng);
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ();
  const Matrix& R = qr.matrixQR();
  for (int j = 0; j < N; ++j) {
    const Complex r = R(j, j);
    const double mag = std::abs(r);
    const Complex phase = mag > 0.0 ? r / mag : Complex(1.0, 0.0);
    Q.col(j) *= phase;
  }
  return Q;
}

RealMatrix haar_orthogonal(int N, const Seed& seed) {
  if (N < 1) throw InvalidInput("Haar orthogonal matrix needs N >= 1");
  Rng rng(seed);
  RealMatrix Z(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) Z(i, j) = rng.normal();
  Eigen::HouseholderQR<RealMatrix> qr(Z);
  RealMatrix Q = qr.householderQ();
  const RealMatrix& R = qr.matrixQR();
  for (int j = 0; j < N; ++j)
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  return Q;
}

PolarFactors polar(const Matrix& M, PolarSide side, PolarMethod method) {
  check_square(M, "polar decomposition");
  PolarFactors f = method == PolarMethod::kSvd ? polar_svd(M, side) : polar_newton_schulz(M, side);
  verify_polar(M, f);
  return f;
}

double operator_norm(const Matrix& M, NormMethod method) {
  check_square(M, "operator norm");
  const int N = static_cast<int>(M.rows());
  if (N == 0) return 0.0;
  if (N == 1) return std::abs(M(0, 0));
  double value = -1.0;
  switch (method) {
    case NormMethod::kLanczos:
      value = norm_lanczos(M);
      break;
    case NormMethod::kPowerIteration:
      value = norm_power_iteration(M);
      break;
    case NormMethod::kDecomposition:
      break;
  }
  return value >= 0.0 ? value : norm_decomposition(M);
}

double operator_norm_svd(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

Complex normalized_trace(const Matrix& M) {
  check_square(M, "normalized trace");
  if (M.rows() == 0) throw InvalidInput("normalized trace of an empty matrix");
  return M.trace() / static_cast<double>(M.rows());
}

double unitarity_residual(const Matrix& M) {
  return (M * M.adjoint() - Matrix::Identity(M.rows(), M.cols())).norm();
}

}  // namespace cbforms::matnum
