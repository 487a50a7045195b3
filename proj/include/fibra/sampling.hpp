#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fibra/graph_model.hpp"

namespace fibra {

// SplitMix64 finalizer; derives independent stream seeds from (seed, index)
// so that sample i is the same whichever thread draws it.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

// Uniform in [-1, 1]^d for R^d, uniform in [0, 2*pi) for S^1.
inline void sample_into(const PhaseSpace& p, Rng& rng, std::vector<double>& out) {
  if (p.is_circle()) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    out.push_back(angle(rng));
    return;
  }
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (int k = 0; k < p.dim; ++k) out.push_back(box(rng));
}

inline std::vector<double> sample_state(const PhaseSpace& p, Rng& rng) {
  std::vector<double> out;
  sample_into(p, rng, out);
  return out;
}

inline std::vector<double> sample_total_state(const Network& n, Rng& rng) {
  std::vector<double> out;
  for (const NodeId& a : n.sorted_nodes()) sample_into(n.space(a), rng, out);
  return out;
}

}  // namespace fibra
