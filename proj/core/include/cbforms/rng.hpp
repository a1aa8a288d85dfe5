#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace cbforms {

/// Master seed plus a derivation path. Identical seed and path always yield
/// the same stream, independent of platform and standard library.
class Seed {
 public:
  Seed() = default;
  explicit Seed(std::uint64_t master) : master_(master) {}
  Seed(std::uint64_t master, std::vector<std::uint64_t> path)
      : master_(master), path_(std::move(path)) {}

  /// Seed for a sub-stream; trials and matrices use disjoint children.
  [[nodiscard]] Seed child(std::uint64_t k) const;
  [[nodiscard]] Seed child(std::initializer_list<std::uint64_t> ks) const;

  [[nodiscard]] std::uint64_t master() const { return master_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const { return path_; }

  /// 64-bit state obtained by SplitMix64-folding the path into the master.
  [[nodiscard]] std::uint64_t derive() const;

  friend bool operator==(const Seed&, const Seed&) = default;

 private:
  std::uint64_t master_ = 0;
  std::vector<std::uint64_t> path_;
};

/// Portable random source. std::normal_distribution is implementation
/// defined, so the Gaussian is produced here by Box-Muller over mt19937_64.
class Rng {
 public:
  explicit Rng(const Seed& seed) : engine_(seed.derive()) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal.
  double normal();
  /// Uniform in {-1, +1}.
  int sign();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cbforms
