#include "cbforms/freecomb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cbforms/error.hpp"

namespace cbforms::freecomb {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("64-bit overflow in exact moment");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("64-bit overflow in exact moment");
  return r;
}

bool cancels(const Letter& a, const Letter& b) {
  return a.generator == b.generator && a.starred != b.starred;
}

void push_reduced(Word& stack, const Letter& x) {
  if (!stack.empty() && cancels(stack.back(), x))
    stack.pop_back();
  else
    stack.push_back(x);
}

struct WeightedWord {
  Word word;
  Word adjoint;
  double coeff;
  std::int64_t icoeff;
};

std::vector<WeightedWord> weighted_words(const ncpoly::NCPolynomial& p, bool exact) {
  std::vector<WeightedWord> out;
  auto add = [&](const Word& w, double c) {
    out.push_back({w, adjoint(w), c, exact ? static_cast<std::int64_t>(c) : 0});
  };
  if (p.constant() != 0.0) add(Word{}, p.constant());
  for (const auto& [w, c] : p.terms()) add(word_of(w), c);
  return out;
}

class MomentEnumerator {
 public:
  MomentEnumerator(const std::vector<WeightedWord>& words, int depth, bool exact)
      : words_(words), depth_(depth), exact_(exact) {}

  MomentValue run() {
    Word stack;
    descend(0, stack, 1.0, 1);
    MomentValue v;
    v.exact = exact_;
    v.integer = isum_;
    v.real = exact_ ? static_cast<double>(isum_) : sum_;
    return v;
  }

 private:
  void descend(int level, const Word& stack, double coeff, std::int64_t icoeff) {
    if (level == depth_) {
      if (!stack.empty()) return;
      if (exact_)
        isum_ = checked_add(isum_, icoeff);
      else
        sum_ += coeff;
      return;
    }
    const bool starred_slot = level % 2 == 1;
    for (const WeightedWord& ww : words_) {
      Word next = stack;
      for (const Letter& x : starred_slot ? ww.adjoint : ww.word) push_reduced(next, x);
      if (exact_)
        descend(level + 1, next, 0.0, checked_mul(icoeff, ww.icoeff));
      else
        descend(level + 1, next, coeff * ww.coeff, 0);
    }
  }

  const std::vector<WeightedWord>& words_;
  int depth_;
  bool exact_;
  double sum_ = 0.0;
  std::int64_t isum_ = 0;
};

void check_pairing_args(int d, int m, int cap) {
  if (d < 1 || m < 1) throw InvalidInput("star pairings need d >= 1 and m >= 1");
  if (2 * d * m > cap) {
    std::ostringstream msg;
    msg << "2dm = " << 2 * d * m << " exceeds pairing cap " << cap;
    throw CapExceeded(msg.str());
  }
}

}  // namespace

Word reduce(const Word& w) {
  // A single left-to-right stack pass yields the unique reduced form.
  Word stack;
  stack.reserve(w.size());
  for (const Letter& x : w) push_reduced(stack, x);
  return stack;
}

int phi(const Word& w) { return reduce(w).empty() ? 1 : 0; }

Word adjoint(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& x : out) x.starred = !x.starred;
  return out;
}

Word word_of(const std::vector<int>& generators) {
  Word w;
  w.reserve(generators.size());
  for (int g : generators) w.push_back({g, false});
  return w;
}

bool is_star_pairing(const StarPairing& p) {
  const int L = 2 * p.d * p.m;
  if (p.d < 1 || p.m < 1 || static_cast<int>(p.pairs.size()) * 2 != L) return false;
  std::vector<int> seen(static_cast<std::size_t>(L), 0);
  for (const auto& [a, b] : p.pairs) {
    if (a < 0 || b >= L || a >= b) return false;
    if (seen[a]++ || seen[b]++) return false;
    if ((a / p.d) % 2 == (b / p.d) % 2) return false;
  }
  for (const auto& [a1, b1] : p.pairs)
    for (const auto& [a2, b2] : p.pairs)
      if (a1 < a2 && a2 < b1 && b1 < b2) return false;
  return true;
}

void for_each_star_pairing(int d, int m, const std::function<void(const StarPairing&)>& visit,
                           int cap) {
  check_pairing_args(d, m, cap);
  const int L = 2 * d * m;
  std::vector<int> partner(static_cast<std::size_t>(L), -1);
  auto color = [d](int pos) { return (pos / d) % 2; };

  StarPairing current{d, m, {}};
  auto emit = [&] {
    current.pairs.clear();
    for (int a = 0; a < L; ++a)
      if (partner[a] > a) current.pairs.emplace_back(a, partner[a]);
    visit(current);
  };

  std::function<void(int)> extend = [&](int from) {
    int i = from;
    while (i < L && partner[i] >= 0) ++i;
    if (i == L) {
      emit();
      return;
    }
    // Every position left of i is paired, so an open pair (a, b) with
    // a < i < b caps the partner of i at b (otherwise the pairs cross).
    int bound = i + 1;
    while (bound < L && partner[bound] < 0) ++bound;
    for (int j = i + 1; j < bound; j += 2) {
      if (color(j) == color(i)) continue;
      partner[i] = j;
      partner[j] = i;
      extend(i + 1);
      partner[i] = -1;
      partner[j] = -1;
    }
  };
  extend(0);
}

std::vector<StarPairing> enumerate_star_pairings(int d, int m, int cap) {
  std::vector<StarPairing> out;
  for_each_star_pairing(d, m, [&out](const StarPairing& p) { out.push_back(p); }, cap);
  return out;
}

std::uint64_t count_star_pairings(int d, int m, int cap) {
  std::uint64_t count = 0;
  for_each_star_pairing(d, m, [&count](const StarPairing&) { ++count; }, cap);
  return count;
}

__extension__ using Wide = __int128;

std::int64_t fuss_catalan(int d, int m) {
  if (d < 0 || m < 1) throw InvalidInput("Fuss-Catalan needs d >= 0 and m >= 1");
  const Wide N = static_cast<Wide>(m) * (d + 1);
  const int K = m - 1;
  const Wide limit = std::numeric_limits<std::int64_t>::max();
  // Intermediate values binom(N - K + i, i) stay below 2^100 or we give up.
  const Wide guard = static_cast<Wide>(1) << 100;
  Wide r = 1;
  for (int i = 1; i <= K; ++i) {
    if (r > guard / (N - K + i)) throw Overflow("Fuss-Catalan number overflows 64 bits");
    r = r * (N - K + i) / i;
  }
  r /= m;
  if (r > limit) throw Overflow("Fuss-Catalan number overflows 64 bits");
  return static_cast<std::int64_t>(r);
}

Word word_from_tuple(const IndexTuple& tuple) {
  Word w;
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    const Word part = word_of(tuple[k]);
    const Word piece = k % 2 == 0 ? part : adjoint(part);
    w.insert(w.end(), piece.begin(), piece.end());
  }
  return w;
}

std::vector<StarPairing> consistent_pairings(const IndexTuple& tuple, int d, int m, int cap) {
  if (static_cast<int>(tuple.size()) != 2 * m) throw InvalidInput("index tuple must hold 2m d-tuples");
  for (const auto& part : tuple)
    if (static_cast<int>(part.size()) != d) throw InvalidInput("index tuple entries must have length d");
  const Word w = word_from_tuple(tuple);
  std::vector<StarPairing> out;
  for_each_star_pairing(
      d, m,
      [&](const StarPairing& p) {
        for (const auto& [a, b] : p.pairs)
          if (!cancels(w[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(b)])) return;
        out.push_back(p);
      },
      cap);
  return out;
}

bool has_integer_coefficients(const ncpoly::NCPolynomial& p) {
  auto integral = [](double c) { return std::abs(c) < 0x1.0p53 && std::floor(c) == c; };
  if (!integral(p.constant())) return false;
  for (const auto& [w, c] : p.terms())
    if (!integral(c)) return false;
  return true;
}

MomentValue trace_moment_exact(const ncpoly::NCPolynomial& p, int m, std::uint64_t cap) {
  if (m < 1) throw InvalidInput("moment order must be >= 1");
  const bool exact = has_integer_coefficients(p);
  const auto words = weighted_words(p, exact);
  if (words.empty()) return MomentValue{exact, 0, 0.0};
  std::uint64_t total = 1;
  for (int k = 0; k < 2 * m; ++k) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(words.size()), &total) || total > cap) {
      std::ostringstream msg;
      msg << words.size() << "^" << 2 * m << " monomial choices exceed moment cap " << cap;
      throw CapExceeded(msg.str());
    }
  }
  return MomentEnumerator(words, 2 * m, exact).run();
}

MomentValue trace_inner_product(const ncpoly::NCPolynomial& p, const ncpoly::NCPolynomial& q) {
  const bool exact = has_integer_coefficients(p) && has_integer_coefficients(q);
  const auto pw = weighted_words(p, exact);
  const auto qw = weighted_words(q, exact);
  MomentValue v;
  v.exact = exact;
  for (const auto& a : pw)
    for (const auto& b : qw) {
      Word w = a.word;
      w.insert(w.end(), b.adjoint.begin(), b.adjoint.end());
      if (!phi(w)) continue;
      if (exact)
        v.integer = checked_add(v.integer, checked_mul(a.icoeff, b.icoeff));
      else
        v.real += a.coeff * b.coeff;
    }
  if (exact) v.real = static_cast<double>(v.integer);
  return v;
}

MomentValue moment_upper_bound(const ncpoly::NCPolynomial& p, int m) {
  if (!p.is_homogeneous()) throw InvalidInput("moment bound needs a homogeneous polynomial");
  if (m < 1) throw InvalidInput("moment order must be >= 1");
  const std::int64_t count = fuss_catalan(p.degree(), m);
  MomentValue v;
  v.exact = has_integer_coefficients(p);
  if (v.exact) {
    std::int64_t sq = checked_mul(static_cast<std::int64_t>(p.constant()), static_cast<std::int64_t>(p.constant()));
    for (const auto& [w, c] : p.terms())
      sq = checked_add(sq, checked_mul(static_cast<std::int64_t>(c), static_cast<std::int64_t>(c)));
    std::int64_t r = count;
    for (int k = 0; k < m; ++k) r = checked_mul(r, sq);
    v.integer = r;
    v.real = static_cast<double>(r);
  } else {
    const double norm = ncpoly::l2_norm(p);
    v.real = static_cast<double>(count) * std::pow(norm * norm, m);
  }
  return v;
}

}  // namespace cbforms::freecomb
