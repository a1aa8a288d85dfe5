#include <doctest.h>

#include <cmath>

#include "cbforms/error.hpp"
#include "cbforms/quantum.hpp"
#include "oracles.hpp"

using namespace cbforms;
using namespace cbforms::quantum;
using forms::CubePoint;
using forms::Monomial;

namespace {

QuantumQueryCircuit identity_circuit(int n, int d) {
  QuantumQueryCircuit c;
  c.n = n;
  c.s = 1;
  c.d = d;
  c.u = Eigen::VectorXd::Unit(n, 0);
  c.v = c.u;
  for (int b = 0; b < d; ++b) c.unitaries.push_back(Eigen::MatrixXd::Identity(n, n));
  return c;
}

// Dense reference for T(x): explicit Kronecker oracle matrices.
double eval_T_dense(const QuantumQueryCircuit& c, const CubePoint& x) {
  const int D = c.dim();
  Eigen::RowVectorXd row = c.u.transpose();
  for (int b = 0; b < c.d; ++b) {
    Eigen::MatrixXd O = Eigen::MatrixXd::Zero(D, D);
    for (int i = 0; i < c.n; ++i)
      for (int k = 0; k < c.s; ++k) O(i * c.s + k, i * c.s + k) = x.at(b, i);
    row = row * c.unitaries[static_cast<std::size_t>(b)] * O;
  }
  return row.dot(c.v);
}

}  // namespace

TEST_CASE("identity circuit reads one product") {
  const auto c = identity_circuit(3, 3);
  for (std::uint64_t mask = 0; mask < 512; mask += 13) {
    const auto x = CubePoint::from_mask(3, 3, mask);
    CHECK(eval_T(c, x) == x.at(0, 0) * x.at(1, 0) * x.at(2, 0));
  }
  const auto f = extract_form(c);
  CHECK(f.terms().size() == 1);
  CHECK(f.coefficient(Monomial({0, 1, 2}, {0, 0, 0})) == 1.0);
  CHECK_THROWS_AS(eval_T(c, CubePoint(2, 3)), DimensionMismatch);
}

TEST_CASE("Forrelation values") {
  const auto c4 = gen_forrelation_circuit(4);
  c4.validate();
  CHECK(std::abs(eval_T(c4, CubePoint(2, 4)) - 0.5) <= 1e-15);
  const auto f4 = extract_form(c4);
  CHECK(f4.terms().size() == 16);
  for (const auto& [m, coeff] : f4.terms()) CHECK(std::abs(std::abs(coeff) - 0.125) <= 1e-15);
  CHECK(std::abs(forms::variance(f4) - 0.25) <= 1e-15);

  const auto f2 = extract_form(gen_forrelation_circuit(2));
  const double a = std::pow(2.0, -1.5);
  CHECK(std::abs(f2.coefficient(Monomial({0, 1}, {0, 0})) - a) <= 1e-15);
  CHECK(std::abs(f2.coefficient(Monomial({0, 1}, {0, 1})) - a) <= 1e-15);
  CHECK(std::abs(f2.coefficient(Monomial({0, 1}, {1, 0})) - a) <= 1e-15);
  CHECK(std::abs(f2.coefficient(Monomial({0, 1}, {1, 1})) + a) <= 1e-15);

  CHECK_THROWS_AS(gen_forrelation_circuit(6), InvalidInput);
  const auto c3 = gen_forrelation_circuit(4, 3);
  c3.validate();
  CHECK(c3.unitaries.size() == 3);
}

TEST_CASE("eval_T matches the dense Kronecker product and stays in [-1, 1]") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto c = gen_random_circuit(3, 1 + static_cast<int>(s % 2), 2 + static_cast<int>(s % 2), Seed(50).child(s));
    c.validate();
    const int bits = c.n * c.d;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      const auto x = CubePoint::from_mask(c.d, c.n, mask);
      const double t = eval_T(c, x);
      CHECK(std::abs(t - eval_T_dense(c, x)) <= 1e-13);
      CHECK(t * t <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("algebraic and Fourier extraction agree and reproduce T") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int n = 2 + static_cast<int>(s % 3);
    const int d = 2 + static_cast<int>(s % 2);
    if (n * d > 16) continue;
    const auto c = gen_random_circuit(n, 1 + static_cast<int>(s % 2), d, Seed(60).child(s));
    const auto alg = extract_form(c, ExtractionMethod::kAlgebraic);
    const auto fou = extract_form(c, ExtractionMethod::kFourier);
    for (const auto& [m, coeff] : alg.terms()) CHECK(std::abs(coeff - fou.coefficient(m)) <= 1e-12);
    for (const auto& [m, coeff] : fou.terms()) CHECK(std::abs(coeff - alg.coefficient(m)) <= 1e-12);
    CHECK(std::abs(fou.constant()) <= 1e-12);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * d)); ++mask) {
      const auto x = CubePoint::from_mask(d, n, mask);
      CHECK(std::abs(forms::evaluate(alg, x) - eval_T(c, x)) <= 1e-12);
    }
    CHECK(forms::sup_norm_bruteforce(alg) <= 1.0 + 1e-12);
  }
}

TEST_CASE("extraction caps") {
  const auto c = gen_random_circuit(6, 1, 4, Seed(70));
  CHECK_THROWS_AS(extract_form(c, ExtractionMethod::kFourier), CapExceeded);
  CHECK_NOTHROW(extract_form(c, ExtractionMethod::kAlgebraic));
}

TEST_CASE("circuit validation") {
  auto c = identity_circuit(2, 2);
  c.unitaries[1](0, 1) = 0.1;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  auto c2 = identity_circuit(2, 2);
  c2.u *= 2.0;
  CHECK_THROWS_AS(c2.validate(), InvalidInput);
  auto c3 = identity_circuit(2, 2);
  c3.unitaries.pop_back();
  CHECK_THROWS_AS(c3.validate(), InvalidInput);
}

TEST_CASE("address form structure") {
  CHECK(address_index({0, 0}) == 0);
  CHECK(address_index({1, 0}) == 2);
  CHECK(address_index({0, 1}) == 1);
  const auto f = gen_address_form(2);
  CHECK(f.d() == 3);
  CHECK(f.n() == 4);
  CHECK(f.terms().size() == 16);
  for (const auto& [m, c] : f.terms()) CHECK(std::abs(c) == 0.25);
  CHECK(forms::sup_norm_bruteforce(f) == 1.0);
  // Exactly one g_a survives: f(x) = +-x_3(addr) with addr from the parities.
  for (std::uint64_t mask = 0; mask < 4096; mask += 5) {
    const auto x = CubePoint::from_mask(3, 4, mask);
    const int a1 = x.at(0, 0) * x.at(0, 1) < 0 ? 1 : 0;
    const int a2 = x.at(1, 0) * x.at(1, 1) < 0 ? 1 : 0;
    CHECK(std::abs(forms::evaluate(f, x)) == 1.0);
    CHECK(std::abs(forms::evaluate(f, x) - x.at(0, 0) * x.at(1, 0) * x.at(2, address_index({a1, a2}))) == 0.0);
  }
  CHECK_THROWS_AS(gen_address_form(0), InvalidInput);
}

TEST_CASE("lifting a single-oracle algorithm") {
  for (int m = 1; m <= 4; ++m)
    for (int d = 1; d <= 3; ++d) {
      SingleOracleCircuit c;
      c.m = m;
      c.s = 2;
      c.d = d;
      Rng rng(Seed(80).child({static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(d)}));
      c.u = Eigen::VectorXd::NullaryExpr(m * 2, [&] { return rng.normal(); }).normalized();
      c.v = Eigen::VectorXd::NullaryExpr(m * 2, [&] { return rng.normal(); }).normalized();
      for (int b = 0; b < d; ++b)
        c.unitaries.push_back(matnum::haar_orthogonal(m * 2, Seed(81).child({static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(b)})));
      const auto lifted = lift_general_algorithm(c);
      lifted.validate();
      CHECK(lifted.n == m + 1);
      for (int z = 0; z < (1 << m); ++z) {
        std::vector<int> bits(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) bits[static_cast<std::size_t>(i)] = (z >> i) & 1 ? -1 : 1;
        CHECK(std::abs(eval_T(lifted, lifted_point(bits, d)) - eval_single(c, bits)) <= 1e-12);
      }
    }
}

TEST_CASE("lifting a constant algorithm gives a constant slice") {
  // u = v, U_1 = U_2 = I, one oracle bit: T = z^2 = 1 for every z.
  SingleOracleCircuit c;
  c.m = 1;
  c.s = 1;
  c.d = 2;
  c.u = Eigen::VectorXd::Ones(1);
  c.v = c.u;
  c.unitaries = {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)};
  const auto lifted = lift_general_algorithm(c);
  for (int z : {-1, 1}) CHECK(eval_T(lifted, lifted_point({z}, 2)) == 1.0);
}

TEST_CASE("random circuits are reproducible") {
  const auto a = gen_random_circuit(4, 2, 3, Seed(90));
  const auto b = gen_random_circuit(4, 2, 3, Seed(90));
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
  for (int k = 0; k < 3; ++k) CHECK(a.unitaries[static_cast<std::size_t>(k)] == b.unitaries[static_cast<std::size_t>(k)]);
}
