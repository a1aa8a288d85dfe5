#pragma once

// Exact combinatorics of free Haar unitaries. The trace of a word in
// u_k, u_k^* is 1 exactly when the word reduces to the identity of the
// free group, so no operator is ever built.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "cbforms/ncpoly.hpp"

namespace cbforms::freecomb {

struct Letter {
  int generator = 0;
  bool starred = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Product of generators and adjoints; the empty word is the identity.
using Word = std::vector<Letter>;

/// Cancels adjacent g g^* and g^* g pairs until none remain.
Word reduce(const Word& w);

/// 1 if w reduces to the identity, 0 otherwise.
int phi(const Word& w);

/// (u_{w_1} ... u_{w_k})^* = u_{w_k}^* ... u_{w_1}^*.
Word adjoint(const Word& w);

/// u_{i} as a word of unstarred letters.
Word word_of(const std::vector<int>& generators);

/// Non-crossing pairing of [2dm] that only joins positions of different
/// colors; position p (0-based) is colored by the parity of p / d.
struct StarPairing {
  int d = 0;
  int m = 0;
  /// Pairs (a, b) with a < b, sorted by a.
  std::vector<std::pair<int, int>> pairs;
  friend bool operator==(const StarPairing&, const StarPairing&) = default;
};

/// Checks perfect matching, non-crossing and color alternation.
bool is_star_pairing(const StarPairing& p);

inline constexpr int kDefaultPairingCap = 28;

/// Backtracking over the leftmost unpaired position. Calls `visit` once per
/// pairing, in a deterministic order. Throws CapExceeded if 2dm > cap.
void for_each_star_pairing(int d, int m, const std::function<void(const StarPairing&)>& visit,
                           int cap = kDefaultPairingCap);

std::vector<StarPairing> enumerate_star_pairings(int d, int m, int cap = kDefaultPairingCap);

std::uint64_t count_star_pairings(int d, int m, int cap = kDefaultPairingCap);

/// (1/m) * binom(m(d+1), m-1), overflow-checked.
std::int64_t fuss_catalan(int d, int m);

/// Indices (i_1, j_1, ..., i_m, j_m), each a d-tuple of generators.
using IndexTuple = std::vector<std::vector<int>>;

/// The word u_{i_1} u_{j_1}^* ... u_{i_m} u_{j_m}^*.
Word word_from_tuple(const IndexTuple& tuple);

/// Star pairings that only join equal generators of the tuple's word.
std::vector<StarPairing> consistent_pairings(const IndexTuple& tuple, int d, int m,
                                             int cap = kDefaultPairingCap);

/// Result of an exact trace computation: an exact integer when every
/// coefficient is an integer, a double otherwise.
struct MomentValue {
  bool exact = false;
  std::int64_t integer = 0;
  double real = 0.0;

  [[nodiscard]] double value() const { return exact ? static_cast<double>(integer) : real; }
};

inline constexpr std::uint64_t kDefaultMomentCap = 10'000'000;

/// phi((p p^*)^m) summed exactly over every choice of 2m monomials.
MomentValue trace_moment_exact(const ncpoly::NCPolynomial& p, int m,
                               std::uint64_t cap = kDefaultMomentCap);

/// phi(p q^*).
MomentValue trace_inner_product(const ncpoly::NCPolynomial& p, const ncpoly::NCPolynomial& q);

/// C_{d,m} * ||p||_2^{2m} for homogeneous p of degree d.
MomentValue moment_upper_bound(const ncpoly::NCPolynomial& p, int m);

/// True when every coefficient (constant included) is an integer below 2^53.
bool has_integer_coefficients(const ncpoly::NCPolynomial& p);

}  // namespace cbforms::freecomb
