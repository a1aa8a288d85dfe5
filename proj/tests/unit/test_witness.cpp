#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbforms/error.hpp"
#include "cbforms/quantum.hpp"
#include "cbforms/witness.hpp"

using namespace cbforms;
using namespace cbforms::witness;
using forms::Monomial;
using matnum::Complex;

namespace {

const double kE = std::numbers::e;

// sum_i y_i z_i with k terms.
BlockMultilinearForm diagonal_pairs(int k) {
  BlockMultilinearForm f(2, k);
  for (int i = 0; i < k; ++i) f.add_term(Monomial({0, 1}, {i, i}), 1.0);
  return f;
}

double root_sum(const BlockMultilinearForm& f, int block) {
  double s = 0.0;
  for (int i = 0; i < f.n(); ++i) s += std::sqrt(forms::influence(f, {block, i}));
  return s;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {WitnessMethod::kSignBaseline, WitnessMethod::kScalarPhase, WitnessMethod::kPolarHomogeneous,
                 WitnessMethod::kPolarGeneral})
    CHECK(witness_method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(witness_method_from_string("nope"), InvalidInput);
}

TEST_CASE("scalar phase on the address form") {
  for (int d = 1; d <= 6; ++d) {
    const auto r = scalar_phase_witness_address(d);
    CHECK(std::abs(r.achieved - std::pow(2.0, d / 2.0)) <= 1e-12);
    CHECK(r.target == std::pow(2.0, d / 2.0));
    CHECK(r.N == 1);
  }
  CHECK(std::abs(scalar_phase_witness_address(1).achieved - std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(scalar_phase_witness_address(2).achieved - 2.0) <= 1e-12);
  CHECK(std::abs(scalar_phase_witness_address(4).achieved - 4.0) <= 1e-12);
}

TEST_CASE("phase alignment on the last block") {
  // At real +-1 phases alignment gives sum_i |f_i| for the last block.
  const auto f = diagonal_pairs(2);
  const std::vector<std::vector<Complex>> ones(2, std::vector<Complex>(2, Complex(1.0, 0.0)));
  CHECK(std::abs(scalar_phase_align_last(f, ones) - 2.0) <= 1e-15);
}

TEST_CASE("sign baseline") {
  BlockMultilinearForm f(2, 2);
  f.add_term(Monomial({0, 1}, {0, 0}), 1.0);
  const auto r = sign_baseline(f, 100, Seed(1));
  CHECK(r.achieved == 1.0);
  CHECK(r.achieved >= r.target);

  const auto a = sign_baseline(quantum::gen_address_form(2), 200, Seed(2));
  CHECK(a.achieved == 1.0);
  CHECK(a.achieved >= a.target);

  const auto z = sign_baseline(BlockMultilinearForm(2, 2), 10, Seed(3));
  CHECK(z.achieved == 0.0);
  CHECK(z.selected_block == 0);

  BlockMultilinearForm g(2, 1);
  g.add_term(Monomial({0}, {0}), 1.0);
  CHECK_THROWS_AS(sign_baseline(g, 10, Seed(4)), InvalidInput);
}

TEST_CASE("root-influence witness on small products") {
  const auto one = root_influence_witness(diagonal_pairs(1), Side::kFirst, {8}, Seed(10));
  CHECK(std::abs(one.achieved - 1.0) <= 1e-9);
  CHECK(one.unitarity_residual <= 1e-8);

  const auto two = root_influence_witness(diagonal_pairs(2), Side::kFirst, {64}, Seed(11));
  CHECK(two.achieved >= 1.8);
  CHECK(two.achieved <= 2.0 + 1e-9);

  BlockMultilinearForm single(2, 2);
  single.add_term(Monomial({0, 1}, {0, 0}), 1.0);
  for (auto side : {Side::kFirst, Side::kLast}) {
    const auto r = root_influence_witness(single, side, {16}, Seed(12));
    CHECK(std::abs(r.target - 1.0 / std::sqrt(3.0 * kE)) <= 1e-15);
    CHECK(r.achieved >= r.target);
  }
}

TEST_CASE("root-influence witness on the address form") {
  const auto f = quantum::gen_address_form(2);
  CHECK(std::abs(root_sum(f, 2) - 2.0) <= 1e-15);
  ncpoly::MatrixAssignment best(1);
  const auto r = root_influence_witness(f, Side::kLast, {32, 64}, Seed(13), &best);
  CHECK(std::abs(r.target - 2.0 / std::sqrt(4.0 * kE)) <= 1e-12);
  CHECK(r.achieved >= r.target);
  CHECK(r.unitarity_residual <= 1e-8);
  CHECK(r.selected_block == 2);
  REQUIRE(r.schedule_results.size() == 2);
  CHECK(r.schedule_results[0].first == 32);
  CHECK(r.achieved == std::max(r.schedule_results[0].second, r.schedule_results[1].second));
  CHECK(best.dimension() == r.N);
  CHECK(std::abs(matnum::operator_norm(ncpoly::evaluate_form(f, best)) - r.achieved) <= 1e-9);
}

TEST_CASE("witnesses stay below the sup norm on quantum-extracted forms") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto c = quantum::gen_random_circuit(3, 1, 2, Seed(20).child(s));
    const auto f = quantum::extract_form(c);
    for (auto side : {Side::kFirst, Side::kLast}) {
      const auto r = root_influence_witness(f, side, {16, 32}, Seed(21).child(s));
      CHECK(r.achieved <= 1.0 + 1e-6);
      CHECK(r.unitarity_residual <= 1e-8);
    }
    const auto a = aa_witness(f, {16}, Seed(22).child(s));
    CHECK(a.achieved <= 1.0 + 1e-6);
  }
}

TEST_CASE("witness runs are reproducible") {
  const auto f = forms::random_form(3, 3, 8, true, Seed(30));
  const auto a = root_influence_witness(f, Side::kFirst, {16}, Seed(31));
  const auto b = root_influence_witness(f, Side::kFirst, {16}, Seed(31));
  CHECK(a.achieved == b.achieved);
  CHECK(a.unitarity_residual == b.unitarity_residual);
}

TEST_CASE("median witness value grows with N") {
  // The Haar average concentrates as N grows; the median over seeds should
  // not drop by more than noise between N = 4 and N = 64.
  const auto f = forms::random_form(2, 4, 8, true, Seed(40));
  auto median = [&](int N) {
    std::vector<double> v;
    for (std::uint64_t s = 0; s < 9; ++s) v.push_back(root_influence_witness(f, Side::kFirst, {N}, Seed(41).child(s)).achieved);
    std::sort(v.begin(), v.end());
    return v[4];
  };
  CHECK(median(64) >= median(4) - 0.05);
}

TEST_CASE("polar witness on a split polynomial") {
  ncpoly::NCPolynomial p(3);
  p.add_term({0, 2}, 1.0);
  p.add_term({1, 2}, -1.0);
  const auto split = ncpoly::split_outer_variables(p, 2);
  const auto w = polar_witness(split, 16, Seed(50));
  CHECK(w.outer.size() == 2);
  CHECK(w.inner.size() == 1);
  CHECK(w.report.unitarity_residual <= 1e-8);
  CHECK(std::abs(w.report.target - 2.0 / std::sqrt(3.0 * kE)) <= 1e-12);
  CHECK(w.report.achieved >= w.report.target);
}

TEST_CASE("non-homogeneous pipeline") {
  BlockMultilinearForm c(2, 2, 0.75);
  const auto zero = aa_witness(c, {8}, Seed(60));
  CHECK(zero.achieved == 0.75);
  CHECK(zero.N == 1);

  BlockMultilinearForm f(2, 2, 1.0);
  f.add_term(Monomial({0, 1}, {0, 0}), 1.0);
  const auto r = aa_witness(f, {8, 16}, Seed(61));
  CHECK(r.achieved >= 1.0 - 1e-9);
  CHECK(r.achieved >= r.target);
  CHECK(r.selected_block == 0);

  BlockMultilinearForm g(3, 2);
  g.add_term(Monomial({1}, {0}), 0.2);
  g.add_term(Monomial({2}, {1}), 1.0);
  g.add_term(Monomial({2}, {0}), 1.0);
  const auto rg = aa_witness(g, {8}, Seed(62));
  CHECK(rg.selected_block == 2);
  CHECK(rg.achieved >= rg.target);

  const auto h = forms::random_form(3, 3, 6, true, Seed(63));
  CHECK(aa_witness(h, {8}, Seed(64)).selected_block == 0);
}

TEST_CASE("influence inequality on extracted forms") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = quantum::extract_form(quantum::gen_random_circuit(4, 1, 2, Seed(70).child(s)));
    const double var = forms::variance(f);
    CHECK(std::abs(aa_influence_bound(f) - var * var / (kE * 81.0)) <= 1e-15);
    CHECK(aa_inequality_holds(f));
  }
}
