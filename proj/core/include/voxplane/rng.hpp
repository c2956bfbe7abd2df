#pragma once

#include <cmath>
#include <cstdint>

namespace voxplane {

// Counter-based deterministic random stream. Each (seed, key1, key2) tuple
// opens an independent stream, so per-(cluster, iteration) or per-(frame,
// pixel) draws are reproducible for any execution order or thread count.
// splitmix64 finalizer; no libstdc++ distributions (their output is
// implementation-defined).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
    state_ = mix(seed + 0x9e3779b97f4a7c15ULL);
    state_ = mix(state_ ^ mix(key1 + 0xbf58476d1ce4e5b9ULL));
    state_ = mix(state_ ^ mix(key2 + 0x94d049bb133111ebULL));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Multiply-shift; bias < 2^-32 for n < 2^32.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller (one value per call, cached pair).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace voxplane
