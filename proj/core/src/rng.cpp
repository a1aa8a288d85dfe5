#include "cbforms/rng.hpp"

#include <cmath>
#include <numbers>

namespace cbforms {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed Seed::child(std::uint64_t k) const {
  Seed s = *this;
  s.path_.push_back(k);
  return s;
}

Seed Seed::child(std::initializer_list<std::uint64_t> ks) const {
  Seed s = *this;
  s.path_.insert(s.path_.end(), ks.begin(), ks.end());
  return s;
}

std::uint64_t Seed::derive() const {
  std::uint64_t h = splitmix64(master_);
  for (std::uint64_t k : path_) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

int Rng::sign() { return (engine_() >> 63) ? -1 : 1; }

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire-free rejection keeps the stream simple and unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

}  // namespace cbforms
