#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace msql::test {

struct Rng {
  std::mt19937 engine;

  explicit Rng(std::uint32_t seed) : engine(seed) {}

  int below(int n) { return static_cast<int>(engine() % static_cast<std::uint32_t>(n)); }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine) < p;
  }

  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[static_cast<std::size_t>(below(static_cast<int>(pool.size())))];
  }
};

inline std::string ident_pool(Rng& rng) {
  static const std::vector<std::string> pool = {
      "alpha", "beta", "gamma", "delta", "kappa", "omega", "item", "name",
      "grade", "title", "kid",   "class_", "person", "blog", "tags", "score",
  };
  return rng.pick(pool);
}

}  // namespace msql::test
