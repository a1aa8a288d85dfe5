#include "cbforms/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "cbforms/error.hpp"

namespace cbforms::forms {

Monomial::Monomial(std::span<const Variable> vars) {
  blocks.reserve(vars.size());
  indices.reserve(vars.size());
  for (const Variable& v : vars) {
    blocks.push_back(v.block);
    indices.push_back(v.index);
  }
}

bool Monomial::contains(Variable v) const {
  const int k = position_of_block(v.block);
  return k >= 0 && indices[static_cast<std::size_t>(k)] == v.index;
}

int Monomial::position_of_block(int b) const {
  const auto it = std::lower_bound(blocks.begin(), blocks.end(), b);
  if (it == blocks.end() || *it != b) return -1;
  return static_cast<int>(it - blocks.begin());
}

CubePoint::CubePoint(int d, int n, int fill)
    : d_(d), n_(n), values_(static_cast<std::size_t>(d) * static_cast<std::size_t>(n), fill) {
  if (d < 1 || n < 1) throw InvalidInput("cube point needs d >= 1 and n >= 1");
  if (fill != 1 && fill != -1) throw InvalidInput("cube point entries must be +1 or -1");
}

CubePoint CubePoint::from_mask(int d, int n, std::uint64_t mask) {
  CubePoint x(d, n);
  for (int b = 0; b < d; ++b)
    for (int i = 0; i < n; ++i)
      if ((mask >> (b * n + i)) & 1U) x.set(b, i, -1);
  return x;
}

void CubePoint::set(int b, int i, int value) {
  if (value != 1 && value != -1) throw InvalidInput("cube point entries must be +1 or -1");
  if (b < 0 || b >= d_ || i < 0 || i >= n_) throw DimensionMismatch("cube point index out of range");
  values_[static_cast<std::size_t>(b * n_ + i)] = value;
}

BlockMultilinearForm::BlockMultilinearForm(int d, int n, double constant)
    : d_(d), n_(n), constant_(constant) {
  if (d < 1 || n < 1) throw InvalidInput("form needs d >= 1 and n >= 1");
}

double BlockMultilinearForm::coefficient(const Monomial& m) const {
  if (m.degree() == 0) return constant_;
  const auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void BlockMultilinearForm::validate(const Monomial& m) const {
  if (m.blocks.size() != m.indices.size())
    throw InvalidInput("monomial blocks and indices differ in length");
  if (m.degree() > d_) throw InvalidInput("monomial degree exceeds the number of blocks");
  for (std::size_t k = 0; k < m.blocks.size(); ++k) {
    if (m.blocks[k] < 0 || m.blocks[k] >= d_) throw InvalidInput("monomial block out of range");
    if (m.indices[k] < 0 || m.indices[k] >= n_) throw InvalidInput("monomial index out of range");
    if (k > 0 && m.blocks[k] <= m.blocks[k - 1])
      throw InvalidInput("monomial blocks must be strictly increasing");
  }
}

void BlockMultilinearForm::add_term(const Monomial& m, double coeff) {
  validate(m);
  if (m.degree() == 0) {
    constant_ += coeff;
    return;
  }
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int BlockMultilinearForm::degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
  return deg;
}

bool BlockMultilinearForm::is_homogeneous() const {
  if (constant_ != 0.0) return false;
  return std::all_of(terms_.begin(), terms_.end(),
                     [this](const auto& t) { return t.first.degree() == d_; });
}

BlockMultilinearForm& BlockMultilinearForm::operator+=(const BlockMultilinearForm& other) {
  if (other.d_ != d_ || other.n_ != n_) throw DimensionMismatch("adding forms of different shapes");
  constant_ += other.constant_;
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

BlockMultilinearForm& BlockMultilinearForm::operator-=(const BlockMultilinearForm& other) {
  if (other.d_ != d_ || other.n_ != n_)
    throw DimensionMismatch("subtracting forms of different shapes");
  constant_ -= other.constant_;
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

BlockMultilinearForm& BlockMultilinearForm::operator*=(double s) {
  constant_ *= s;
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

double evaluate(const BlockMultilinearForm& f, const CubePoint& x) {
  if (x.d() != f.d() || x.n() != f.n()) {
    std::ostringstream msg;
    msg << "point has shape " << x.n() << "x" << x.d() << " but form has " << f.n() << "x" << f.d();
    throw DimensionMismatch(msg.str());
  }
  double sum = f.constant();
  for (const auto& [m, c] : f.terms()) {
    int sign = 1;
    for (int k = 0; k < m.degree(); ++k) sign *= x.at(m.variable(k));
    sum += sign * c;
  }
  return sum;
}

double variance(const BlockMultilinearForm& f) {
  double sum = 0.0;
  for (const auto& [m, c] : f.terms()) sum += c * c;
  return sum;
}

double influence(const BlockMultilinearForm& f, Variable v) {
  double sum = 0.0;
  for (const auto& [m, c] : f.terms())
    if (m.contains(v)) sum += c * c;
  return sum;
}

std::vector<std::vector<double>> influence_table(const BlockMultilinearForm& f) {
  std::vector<std::vector<double>> table(static_cast<std::size_t>(f.d()),
                                         std::vector<double>(static_cast<std::size_t>(f.n()), 0.0));
  for (const auto& [m, c] : f.terms())
    for (int k = 0; k < m.degree(); ++k)
      table[static_cast<std::size_t>(m.blocks[k])][static_cast<std::size_t>(m.indices[k])] += c * c;
  return table;
}

MaxInfluence max_influence(const BlockMultilinearForm& f) {
  const auto table = influence_table(f);
  MaxInfluence best{{0, 0}, table[0][0]};
  for (int b = 0; b < f.d(); ++b)
    for (int i = 0; i < f.n(); ++i)
      if (table[b][i] > best.value) best = {{b, i}, table[b][i]};
  return best;
}

double sum_block_influence(const BlockMultilinearForm& f, int b) {
  if (b < 0 || b >= f.d()) throw InvalidInput("block out of range");
  double sum = 0.0;
  for (const auto& [m, c] : f.terms())
    if (m.position_of_block(b) >= 0) sum += c * c;
  return sum;
}

BlockMultilinearForm restrict(const BlockMultilinearForm& f, const Restriction& r) {
  for (const auto& [v, value] : r) {
    if (v.block < 0 || v.block >= f.d() || v.index < 0 || v.index >= f.n())
      throw InvalidInput("restriction variable out of range");
    if (value != 1 && value != -1) throw InvalidInput("restriction values must be +1 or -1");
  }
  BlockMultilinearForm g(f.d(), f.n(), f.constant());
  for (const auto& [m, c] : f.terms()) {
    Monomial rest;
    int sign = 1;
    for (int k = 0; k < m.degree(); ++k) {
      const auto it = r.find(m.variable(k));
      if (it != r.end()) {
        sign *= it->second;
      } else {
        rest.blocks.push_back(m.blocks[k]);
        rest.indices.push_back(m.indices[k]);
      }
    }
    g.add_term(rest, sign * c);
  }
  return g;
}

std::vector<Variable> relevant_variables(const BlockMultilinearForm& f) {
  std::vector<Variable> vars;
  for (const auto& [m, c] : f.terms())
    for (int k = 0; k < m.degree(); ++k) vars.push_back(m.variable(k));
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

double sup_norm_bruteforce(const BlockMultilinearForm& f, int cap) {
  const auto vars = relevant_variables(f);
  const int k = static_cast<int>(vars.size());
  if (k > cap || k > 62) {
    std::ostringstream msg;
    msg << "sup norm enumeration over " << k << " variables exceeds cap " << cap;
    throw CapExceeded(msg.str());
  }
  // Each term becomes a bit mask over the relevant variables; the monomial
  // value at point `mask` is (-1)^popcount(mask & term_mask).
  std::vector<std::pair<std::uint64_t, double>> terms;
  terms.reserve(f.terms().size());
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t tm = 0;
    for (int j = 0; j < m.degree(); ++j) {
      const auto pos = std::lower_bound(vars.begin(), vars.end(), m.variable(j)) - vars.begin();
      tm |= std::uint64_t{1} << pos;
    }
    terms.emplace_back(tm, c);
  }
  double best = 0.0;
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double sum = f.constant();
    for (const auto& [tm, c] : terms) sum += (std::popcount(mask & tm) & 1) ? -c : c;
    best = std::max(best, std::abs(sum));
  }
  return best;
}

BlockMultilinearForm homogeneous_part(const BlockMultilinearForm& f, int k) {
  if (k < 0 || k > f.d()) throw InvalidInput("homogeneous part degree out of range");
  BlockMultilinearForm g(f.d(), f.n(), k == 0 ? f.constant() : 0.0);
  for (const auto& [m, c] : f.terms())
    if (m.degree() == k) g.add_term(m, c);
  return g;
}

std::vector<BlockMultilinearForm> leading_block_decomposition(const BlockMultilinearForm& f) {
  std::vector<BlockMultilinearForm> parts(static_cast<std::size_t>(f.d()),
                                          BlockMultilinearForm(f.d(), f.n()));
  for (const auto& [m, c] : f.terms()) parts[static_cast<std::size_t>(m.blocks.front())].add_term(m, c);
  return parts;
}

BlockMultilinearForm random_form(int d, int n, int num_terms, bool homogeneous, const Seed& seed) {
  if (num_terms < 0) throw InvalidInput("number of terms must be nonnegative");
  Rng rng(seed);
  BlockMultilinearForm f(d, n);
  const double possible = homogeneous ? std::pow(double(n), d) : std::pow(double(n + 1), d) - 1.0;
  const int target = static_cast<int>(std::min<double>(num_terms, possible));
  if (!homogeneous) f.set_constant(rng.normal());
  while (static_cast<int>(f.terms().size()) < target) {
    Monomial m;
    for (int b = 0; b < d; ++b) {
      // Non-homogeneous: each block independently absent with probability 1/(n+1).
      const auto pick = rng.below(static_cast<std::uint64_t>(homogeneous ? n : n + 1));
      if (static_cast<int>(pick) == n) continue;
      m.blocks.push_back(b);
      m.indices.push_back(static_cast<int>(pick));
    }
    if (m.degree() == 0 || f.terms().contains(m)) continue;
    f.add_term(m, rng.normal());
  }
  return f;
}

}  // namespace cbforms::forms
