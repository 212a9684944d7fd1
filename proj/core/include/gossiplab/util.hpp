// Copyright (c) 2026 The gossiplab developers
// Distributed under the MIT software license.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gossiplab {

// 64-bit finalizer from splitmix64. Good avalanche, cheap, and enough for
// every hash in this project: only distributional properties matter here,
// nothing is adversarial against the hash itself.
inline uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Keyed hash over a short tuple of 64-bit words.
inline uint64_t KeyedHash(std::initializer_list<uint64_t> words) {
  uint64_t h = 0x51a2b3c4d5e6f708ULL;
  for (uint64_t w : words) h = Mix64(h ^ w);
  return h;
}

// FNV-1a over bytes, used for run-summary / event-log digests.
struct Fnv1a {
  uint64_t state = 0xcbf29ce484222325ULL;
  void Write(uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state ^= (v >> (8 * i)) & 0xff;
      state *= 0x100000001b3ULL;
    }
  }
  uint64_t Digest() const { return state; }
};

// Deterministic RNG. splitmix64 state advance with hand-rolled bounded and
// floating draws so sequences do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Lemire's multiply-shift with rejection.
  uint64_t Below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::Below(0)");
    unsigned __int128 m = static_cast<unsigned __int128>(NextU64()) * n;
    uint64_t lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(NextU64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform in [0, 1).
  double NextDouble() { return (NextU64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (fresh pair per call, no cached spare).
  double NextNormal() {
    double u1 = NextDouble();
    double u2 = NextDouble();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double NextLognormal(double mu, double sigma) {
    return std::exp(mu + sigma * NextNormal());
  }

  // Poisson via inversion for small means, normal approximation otherwise.
  int NextPoisson(double mean) {
    if (mean <= 0) return 0;
    if (mean < 30) {
      double l = std::exp(-mean), p = 1.0;
      int k = 0;
      do {
        ++k;
        p *= NextDouble();
      } while (p > l);
      return k - 1;
    }
    double v = mean + std::sqrt(mean) * NextNormal();
    return v < 0 ? 0 : static_cast<int>(v + 0.5);
  }

  // k distinct indices from [0, n), order not meaningful.
  std::vector<uint32_t> SampleWithoutReplacement(uint32_t n, uint32_t k) {
    if (k > n) throw std::invalid_argument("sample size exceeds population");
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; ++i) idx[i] = i;
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t j = i + static_cast<uint32_t>(Below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

  // Independent child stream; used for per-replica seed splitting.
  static uint64_t SplitSeed(uint64_t base, uint64_t lane) {
    return Mix64(base ^ Mix64(lane + 0x632be59bd9b4e019ULL));
  }

 private:
  uint64_t state_;
};

}  // namespace gossiplab
