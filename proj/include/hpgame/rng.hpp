#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace hpgame {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so independent streams can be split off a single
// 64-bit run seed without coordination. Stream ids used by the engine:
//   0 = network generation, 1 = placement sampling, 2 = tie-breaks.
class Rng {
 public:
  Rng() = default;
  Rng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // uniform in [0, n), unbiased via rejection
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  int next_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // uniform double in [0,1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), order-independent result (sorted)
  std::vector<int> sample_indices(int n, int k);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
};

inline std::vector<int> Rng::sample_indices(int n, int k) {
  if (k >= n) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  // Floyd's algorithm
  std::vector<int> out;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int j = n - k; j < n; ++j) {
    int t = static_cast<int>(next_below(static_cast<std::uint64_t>(j) + 1));
    if (seen[static_cast<std::size_t>(t)]) t = j;
    seen[static_cast<std::size_t>(t)] = true;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hpgame
