#include "cbforms/quantum.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "cbforms/error.hpp"
#include "cbforms/matnum.hpp"

namespace cbforms::quantum {
namespace {

constexpr double kOrthogonalityTolerance = 1e-10;

bool is_power_of_two(int n) { return n >= 1 && std::has_single_bit(static_cast<unsigned>(n)); }

void validate_real_circuit(int dim, int d, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                           const std::vector<Eigen::MatrixXd>& unitaries) {
  if (u.size() != dim || v.size() != dim) throw InvalidInput("start/end states have the wrong dimension");
  if (std::abs(u.norm() - 1.0) > kOrthogonalityTolerance || std::abs(v.norm() - 1.0) > kOrthogonalityTolerance)
    throw InvalidInput("start/end states must be unit vectors");
  if (static_cast<int>(unitaries.size()) != d) throw InvalidInput("circuit needs exactly d unitaries");
  for (const auto& U : unitaries) {
    if (U.rows() != dim || U.cols() != dim) throw InvalidInput("unitary has the wrong dimension");
    if ((U * U.transpose() - Eigen::MatrixXd::Identity(dim, dim)).norm() > kOrthogonalityTolerance)
      throw InvalidInput("circuit matrix is not orthogonal");
  }
}

Eigen::VectorXd random_unit_vector(int dim, Rng& rng) {
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x(i) = rng.normal();
  return x.normalized();
}

// Coefficient recursion for the algebraic expansion: `row` is the row vector
// after U_{b+1}; selecting oracle index i keeps the entries i*s .. i*s+s-1.
void expand(const QuantumQueryCircuit& c, int b, const Eigen::RowVectorXd& row, std::vector<int>& idx,
            BlockMultilinearForm& f) {
  const int s = c.s;
  for (int i = 0; i < c.n; ++i) {
    Eigen::RowVectorXd sel = Eigen::RowVectorXd::Zero(c.dim());
    sel.segment(i * s, s) = row.segment(i * s, s);
    idx[static_cast<std::size_t>(b)] = i;
    if (b + 1 == c.d) {
      const double coeff = sel.dot(c.v.transpose());
      std::vector<int> blocks(static_cast<std::size_t>(c.d));
      for (int k = 0; k < c.d; ++k) blocks[static_cast<std::size_t>(k)] = k;
      f.add_term(forms::Monomial(std::move(blocks), idx), coeff);
    } else {
      expand(c, b + 1, sel * c.unitaries[static_cast<std::size_t>(b + 1)], idx, f);
    }
  }
}

BlockMultilinearForm extract_algebraic(const QuantumQueryCircuit& c) {
  const double leaves = std::pow(double(c.n), c.d);
  if (leaves > static_cast<double>(kDefaultAlgebraicCap))
    throw CapExceeded("algebraic extraction over n^d index tuples exceeds cap");
  BlockMultilinearForm f(c.d, c.n);
  std::vector<int> idx(static_cast<std::size_t>(c.d), 0);
  expand(c, 0, c.u.transpose() * c.unitaries[0], idx, f);
  return f;
}

BlockMultilinearForm extract_fourier(const QuantumQueryCircuit& c, int cap) {
  const int bits = c.n * c.d;
  if (bits > cap || bits > 40) {
    std::ostringstream msg;
    msg << "Fourier extraction over 2^" << bits << " points exceeds cap n*d <= " << cap;
    throw CapExceeded(msg.str());
  }
  const std::uint64_t size = std::uint64_t{1} << bits;
  std::vector<double> table(size);
  for (std::uint64_t mask = 0; mask < size; ++mask)
    table[mask] = eval_T(c, CubePoint::from_mask(c.d, c.n, mask));
  // In-place Walsh-Hadamard transform: table[S] becomes sum_x T(x) chi_S(x).
  for (std::uint64_t len = 1; len < size; len <<= 1)
    for (std::uint64_t i = 0; i < size; i += len << 1)
      for (std::uint64_t j = i; j < i + len; ++j) {
        const double a = table[j];
        const double b = table[j + len];
        table[j] = a + b;
        table[j + len] = a - b;
      }
  const double scale = 1.0 / static_cast<double>(size);
  BlockMultilinearForm f(c.d, c.n, table[0] * scale);
  for (std::uint64_t S = 1; S < size; ++S) {
    const double coeff = table[S] * scale;
    forms::Monomial m;
    bool block_multilinear = true;
    for (int b = 0; b < c.d && block_multilinear; ++b) {
      const std::uint64_t block_bits = (S >> (b * c.n)) & ((std::uint64_t{1} << c.n) - 1);
      if (block_bits == 0) continue;
      if (std::popcount(block_bits) > 1) {
        block_multilinear = false;
        break;
      }
      m.blocks.push_back(b);
      m.indices.push_back(std::countr_zero(block_bits));
    }
    if (!block_multilinear) {
      if (std::abs(coeff) > 1e-12) throw NumericalFailure("circuit has a non-block-multilinear Fourier coefficient");
      continue;
    }
    f.add_term(m, coeff);
  }
  return f;
}

}  // namespace

void QuantumQueryCircuit::validate() const {
  if (n < 1 || s < 1 || d < 1) throw InvalidInput("circuit needs n, s, d >= 1");
  validate_real_circuit(dim(), d, u, v, unitaries);
}

double eval_T(const QuantumQueryCircuit& c, const CubePoint& x) {
  if (x.d() != c.d || x.n() != c.n) throw DimensionMismatch("input point does not match the circuit (n, d)");
  Eigen::RowVectorXd row = c.u.transpose();
  for (int b = 0; b < c.d; ++b) {
    row = row * c.unitaries[static_cast<std::size_t>(b)];
    for (int i = 0; i < c.n; ++i)
      if (x.at(b, i) < 0) row.segment(i * c.s, c.s) *= -1.0;
  }
  return row.dot(c.v.transpose());
}

BlockMultilinearForm extract_form(const QuantumQueryCircuit& c, ExtractionMethod method, int fourier_cap) {
  c.validate();
  return method == ExtractionMethod::kAlgebraic ? extract_algebraic(c) : extract_fourier(c, fourier_cap);
}

int address_index(const std::vector<int>& bits) {
  int idx = 0;
  for (int a : bits) idx = 2 * idx + a;
  return idx;
}

BlockMultilinearForm gen_address_form(int d) {
  if (d < 1 || d > 20) throw InvalidInput("address form needs 1 <= d <= 20");
  const int n = 1 << d;
  BlockMultilinearForm f(d + 1, n);
  const double coeff = std::ldexp(1.0, -d);
  std::vector<int> a(static_cast<std::size_t>(d));
  for (int addr = 0; addr < n; ++addr) {
    for (int b = 0; b < d; ++b) a[static_cast<std::size_t>(b)] = (addr >> (d - 1 - b)) & 1;
    // g_a expands into one monomial per choice of x_b(1) or x_b(2) in each
    // address block; choosing x_b(2) contributes the sign (-1)^{a_b}.
    for (int choice = 0; choice < n; ++choice) {
      forms::Monomial m;
      int sign = 1;
      for (int b = 0; b < d; ++b) {
        const int second = (choice >> (d - 1 - b)) & 1;
        m.blocks.push_back(b);
        m.indices.push_back(second);
        if (second && a[static_cast<std::size_t>(b)]) sign = -sign;
      }
      m.blocks.push_back(d);
      m.indices.push_back(address_index(a));
      f.add_term(m, sign * coeff);
    }
  }
  return f;
}

Eigen::MatrixXd hadamard(int n) {
  if (!is_power_of_two(n)) throw InvalidInput("Hadamard dimension must be a power of two");
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      H(i, j) = (std::popcount(static_cast<unsigned>(i & j)) & 1) ? -1.0 : 1.0;
  return H / std::sqrt(double(n));
}

QuantumQueryCircuit gen_forrelation_circuit(int n, int k) {
  if (!is_power_of_two(n)) throw InvalidInput("Forrelation needs n a power of two");
  if (k < 1) throw InvalidInput("Forrelation needs k >= 1");
  QuantumQueryCircuit c;
  c.n = n;
  c.s = 1;
  c.d = k;
  c.u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  c.v = c.u;
  c.unitaries.push_back(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd H = hadamard(n);
  for (int b = 1; b < k; ++b) c.unitaries.push_back(H);
  return c;
}

QuantumQueryCircuit gen_random_circuit(int n, int s, int d, const Seed& seed) {
  if (n < 1 || s < 1 || d < 1) throw InvalidInput("random circuit needs n, s, d >= 1");
  QuantumQueryCircuit c;
  c.n = n;
  c.s = s;
  c.d = d;
  Rng rng(seed.child(0));
  c.u = random_unit_vector(n * s, rng);
  c.v = random_unit_vector(n * s, rng);
  for (int b = 0; b < d; ++b)
    c.unitaries.push_back(matnum::haar_orthogonal(n * s, seed.child(static_cast<std::uint64_t>(b + 1))));
  return c;
}

void SingleOracleCircuit::validate() const {
  if (m < 1 || s < 1 || d < 1) throw InvalidInput("single-oracle circuit needs m, s, d >= 1");
  validate_real_circuit(m * s, d, u, v, unitaries);
}

double eval_single(const SingleOracleCircuit& c, const std::vector<int>& z) {
  if (static_cast<int>(z.size()) != c.m) throw DimensionMismatch("oracle string has the wrong length");
  Eigen::RowVectorXd row = c.u.transpose();
  for (int b = 0; b < c.d; ++b) {
    row = row * c.unitaries[static_cast<std::size_t>(b)];
    for (int i = 0; i < c.m; ++i)
      if (z[static_cast<std::size_t>(i)] < 0) row.segment(i * c.s, c.s) *= -1.0;
  }
  return row.dot(c.v.transpose());
}

QuantumQueryCircuit lift_general_algorithm(const SingleOracleCircuit& c) {
  c.validate();
  const int old_dim = c.m * c.s;
  const int new_dim = (c.m + 1) * c.s;
  QuantumQueryCircuit lifted;
  lifted.n = c.m + 1;
  lifted.s = c.s;
  lifted.d = c.d;
  lifted.u = Eigen::VectorXd::Zero(new_dim);
  lifted.v = Eigen::VectorXd::Zero(new_dim);
  lifted.u.head(old_dim) = c.u;
  lifted.v.head(old_dim) = c.v;
  for (const auto& U : c.unitaries) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(new_dim, new_dim);
    L.topLeftCorner(old_dim, old_dim) = U;
    lifted.unitaries.push_back(std::move(L));
  }
  return lifted;
}

CubePoint lifted_point(const std::vector<int>& z, int d) {
  const int m = static_cast<int>(z.size());
  CubePoint x(d, m + 1);
  for (int b = 0; b < d; ++b)
    for (int i = 0; i < m; ++i) x.set(b, i, z[static_cast<std::size_t>(i)]);
  return x;
}

}  // namespace cbforms::quantum
