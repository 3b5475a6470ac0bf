#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace attex {

/// splitmix64 step; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// FNV-1a over a string, for symbol-keyed random vectors.
std::uint64_t hash_str(const std::string& s);

/// Deterministic RNG. The engine is std::mt19937_64 (bit-exact by the
/// standard); the distributions are implemented here because the std::
/// distribution objects are not portable across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; no cached spare, so the draw count
  /// per call is fixed.
  double gaussian();

  /// Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace attex
