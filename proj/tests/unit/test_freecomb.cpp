#include <doctest.h>

#include <random>

#include "cbforms/error.hpp"
#include "cbforms/freecomb.hpp"
#include "oracles.hpp"

using namespace cbforms;
using namespace cbforms::freecomb;
using ncpoly::NCPolynomial;

namespace {

Letter u(int g) { return {g, false}; }
Letter us(int g) { return {g, true}; }

NCPolynomial linear(std::initializer_list<double> coeffs) {
  NCPolynomial p(static_cast<int>(coeffs.size()));
  int k = 0;
  for (double c : coeffs) p.add_term({k++}, c);
  return p;
}

// Random homogeneous polynomial with small integer coefficients.
NCPolynomial random_integer_poly(int t, int d, int terms, std::mt19937& rng) {
  NCPolynomial p(t);
  std::uniform_int_distribution<int> gen(0, t - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int k = 0; k < terms; ++k) {
    NCPolynomial::Word w;
    for (int j = 0; j < d; ++j) w.push_back(gen(rng));
    int c = coeff(rng);
    if (c == 0) c = 1;
    p.add_term(w, c);
  }
  return p;
}

}  // namespace

TEST_CASE("word reduction examples") {
  CHECK(reduce({u(0), us(0)}).empty());
  CHECK(phi({u(0), us(0)}) == 1);
  const Word w{u(0), u(1), us(0), us(1)};
  CHECK(reduce(w) == w);
  CHECK(phi(w) == 0);
  CHECK(phi({u(0), u(1), us(1), us(0)}) == 1);
  CHECK(phi({}) == 1);
  CHECK(phi({u(0), u(0), us(0)}) == 0);
  CHECK(adjoint({u(0), us(1)}) == Word{u(1), us(0)});
}

TEST_CASE("reduction is confluent") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> len(0, 20);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 100000; ++trial) {
    const int t = 1 + trial % 4;
    std::uniform_int_distribution<int> gen(0, t - 1);
    Word w;
    const int L = len(rng);
    for (int k = 0; k < L; ++k) w.push_back({gen(rng), coin(rng) == 1});
    REQUIRE(oracle::reduce_random_order(w, rng) == reduce(w));
  }
}

TEST_CASE("Fuss-Catalan values") {
  CHECK(fuss_catalan(1, 1) == 1);
  CHECK(fuss_catalan(2, 2) == 3);
  CHECK(fuss_catalan(1, 3) == 5);
  CHECK(fuss_catalan(1, 10) == 16796);
  CHECK(fuss_catalan(0, 5) == 1);
  for (int d = 1; d <= 6; ++d)
    for (int m = 1; m <= 8; ++m) CHECK(static_cast<std::uint64_t>(fuss_catalan(d, m)) == oracle::fuss_catalan(d, m));
  CHECK_THROWS_AS(fuss_catalan(1, 0), InvalidInput);
  CHECK_THROWS_AS(fuss_catalan(60, 60), Overflow);
}

TEST_CASE("star pairing enumeration matches brute force") {
  CHECK(enumerate_star_pairings(1, 1).size() == 1);
  CHECK(enumerate_star_pairings(2, 2).size() == 3);
  CHECK(enumerate_star_pairings(1, 3).size() == 5);
  for (int d = 1; d <= 4; ++d)
    for (int m = 1; 2 * d * m <= 12; ++m) {
      const auto ours = enumerate_star_pairings(d, m);
      std::vector<std::vector<std::pair<int, int>>> got;
      for (const auto& p : ours) {
        CHECK(is_star_pairing(p));
        auto pairs = p.pairs;
        std::sort(pairs.begin(), pairs.end());
        got.push_back(pairs);
      }
      std::sort(got.begin(), got.end());
      CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
      CHECK(got == oracle::star_pairings_bruteforce(d, m));
      CHECK(static_cast<std::int64_t>(ours.size()) == fuss_catalan(d, m));
    }
}

TEST_CASE("pairing counts equal Fuss-Catalan numbers") {
  for (int d = 1; d <= 3; ++d)
    for (int m = 1; m <= 4; ++m) CHECK(static_cast<std::int64_t>(count_star_pairings(d, m)) == fuss_catalan(d, m));
  CHECK_THROWS_AS(count_star_pairings(4, 4), CapExceeded);
  CHECK(count_star_pairings(4, 4, 32) == static_cast<std::uint64_t>(fuss_catalan(4, 4)));
}

TEST_CASE("is_star_pairing rejects bad matchings") {
  CHECK_FALSE(is_star_pairing({1, 2, {{0, 2}, {1, 3}}}));  // crossing
  CHECK_FALSE(is_star_pairing({2, 1, {{0, 1}, {2, 3}}}));  // same colour
  CHECK(is_star_pairing({2, 1, {{0, 3}, {1, 2}}}));
}

TEST_CASE("exact moments of small polynomials") {
  NCPolynomial c(1);
  c.add_term({0}, 3.0);
  for (int m = 1; m <= 4; ++m) CHECK(trace_moment_exact(c, m).integer == static_cast<std::int64_t>(std::pow(3.0, 2 * m)));
  const auto two = linear({1, 1});
  CHECK(trace_moment_exact(two, 1).integer == 2);
  CHECK(trace_moment_exact(two, 2).integer == 6);
  CHECK(trace_moment_exact(two, 2).exact);
  CHECK(moment_upper_bound(two, 2).integer == 8);
  const auto three = linear({1, 1, 1});
  CHECK(trace_moment_exact(three, 1).integer == 3);
  CHECK(moment_upper_bound(three, 1).integer == 3);
  CHECK(oracle::moment_bruteforce(two, 2) == 6.0);
}

TEST_CASE("inner products") {
  NCPolynomial p(2);
  p.add_term({0, 1}, 1.0);
  NCPolynomial q(2);
  q.add_term({1, 0}, 1.0);
  CHECK(trace_inner_product(p, p).integer == 1);
  CHECK(trace_inner_product(p, q).integer == 0);
  NCPolynomial r(2, 0.5);
  r.add_term({0, 1}, 0.25);
  r.add_term({1}, -1.5);
  CHECK_FALSE(trace_inner_product(r, r).exact);
  CHECK(std::abs(trace_inner_product(r, r).value() - std::pow(ncpoly::l2_norm(r), 2)) <= 1e-15);
}

TEST_CASE("moments agree with the brute-force word oracle and respect the bound") {
  std::mt19937 rng(77);
  int checked = 0;
  for (int t = 1; t <= 3; ++t)
    for (int d = 1; d <= 2; ++d)
      for (int m = 1; m <= 3; ++m)
        for (int rep = 0; rep < 3; ++rep) {
          const auto p = random_integer_poly(t, d, 1 + rep, rng);
          if (p.terms().empty()) continue;
          const auto exact = trace_moment_exact(p, m);
          REQUIRE(exact.exact);
          CHECK(static_cast<double>(exact.integer) == oracle::moment_bruteforce(p, m));
          CHECK(exact.integer <= moment_upper_bound(p, m).integer);
          if (m == 1) CHECK(exact.integer == trace_inner_product(p, p).integer);
          ++checked;
        }
  CHECK(checked > 40);
}

TEST_CASE("non-integer coefficients fall back to doubles") {
  NCPolynomial p(2);
  p.add_term({0}, 0.5);
  p.add_term({1}, 0.25);
  const auto v = trace_moment_exact(p, 2);
  CHECK_FALSE(v.exact);
  CHECK(std::abs(v.value() - oracle::moment_bruteforce(p, 2)) <= 1e-15);
  CHECK_FALSE(has_integer_coefficients(p));
}

TEST_CASE("moment cap and non-homogeneous bound") {
  const auto p = linear({1, 1, 1, 1});
  CHECK_THROWS_AS(trace_moment_exact(p, 6, 1000), CapExceeded);
  NCPolynomial q(1, 1.0);
  q.add_term({0}, 1.0);
  CHECK_THROWS_AS(moment_upper_bound(q, 1), InvalidInput);
  // phi((1 + u)(1 + u*)) = 2.
  CHECK(trace_moment_exact(q, 1).integer == 2);
}

TEST_CASE("consistent pairings") {
  const auto one = consistent_pairings({{0}, {0}}, 1, 1);
  CHECK(one.size() == 1);
  const auto nested = consistent_pairings({{0, 1}, {0, 1}}, 2, 1);
  REQUIRE(nested.size() == 1);
  CHECK(nested[0].pairs == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}});
  CHECK(consistent_pairings({{0, 1}, {1, 0}}, 2, 1).empty());

  // phi(word) = 1 implies at least one consistent pairing: all tuples with
  // t = 2, d = 2, m = 2.
  int reducible = 0;
  for (int code = 0; code < 256; ++code) {
    IndexTuple tuple(4, std::vector<int>(2));
    for (int k = 0; k < 8; ++k) tuple[static_cast<std::size_t>(k / 2)][static_cast<std::size_t>(k % 2)] = (code >> k) & 1;
    const auto pairs = consistent_pairings(tuple, 2, 2);
    if (phi(word_from_tuple(tuple)) == 1) {
      ++reducible;
      CHECK_FALSE(pairs.empty());
    }
  }
  CHECK(reducible > 0);
}
