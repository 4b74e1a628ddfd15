#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace commtrust {

/// Seeded generator with platform-independent derived draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so bounded integers, unit
/// reals and shuffles are implemented here directly. Child generators are
/// derived from the *seed* and a label, never from the current state, so a
/// stream's values do not depend on how many draws happened elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::string_view label) const;
  static std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

  std::uint64_t next();
  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 bits of resolution.
  double unit();
  bool bernoulli(double p);
  void fill(std::span<std::uint8_t> out);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace commtrust
