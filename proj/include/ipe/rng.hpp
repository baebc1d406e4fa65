#pragma once

#include <cstdint>
#include <random>

namespace ipe::rng {

// splitmix64; used to derive independent per-photon seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x632be59bd9b4e019ull * (index + 1));
  std::uint64_t a = splitmix64(s);
  return a ^ splitmix64(s);
}

using Engine = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits; avoids distribution objects so
// streams are identical across library implementations.
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Engine& g, double p) { return uniform01(g) < p; }

inline int uniform_index(Engine& g, int n) {
  // unbiased via rejection sampling
  const std::uint64_t bound = (~0ull / n) * n;
  std::uint64_t v;
  do { v = g(); } while (v >= bound);
  return static_cast<int>(v % n);
}

template <typename Probs>
int sample_categorical(Engine& g, const Probs& p) {
  double u = uniform01(g);
  int last = 0;
  for (int k = 0; k < static_cast<int>(p.size()); ++k) {
    last = k;
    if (u < p[k]) return k;
    u -= p[k];
  }
  return last;  // numerical slack lands on the final outcome
}

}  // namespace ipe::rng
