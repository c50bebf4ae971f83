#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "smab/error.hpp"
#include "smab/types.hpp"

namespace smab {

// Keyed pseudo-random stream. Substreams are addressed by a path of integer
// components (replication, round, stage, purpose): derive() folds one
// component into the key, so an identical (seed, path) reproduces the same
// sample sequence on every platform, while distinct paths give decorrelated
// streams. The generator core is splitmix64.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(uint64_t seed) : state_(mix(seed ^ 0x243f6a8885a308d3ULL)) {}

  RngStream derive(uint64_t component) const {
    RngStream out;
    out.state_ = mix(state_ ^ mix(component + 0x9e3779b97f4a7c15ULL));
    return out;
  }
  RngStream derive(uint64_t a, uint64_t b) const { return derive(a).derive(b); }
  RngStream derive(uint64_t a, uint64_t b, uint64_t c) const {
    return derive(a).derive(b).derive(c);
  }
  RngStream derive(uint64_t a, uint64_t b, uint64_t c, uint64_t d) const {
    return derive(a).derive(b).derive(c).derive(d);
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix_final(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the first uniform is shifted into (0, 1].
  double next_gaussian() {
    double u1 = double((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  double sample_noise(const NoiseModel& noise) {
    if (noise.sigma == 0.0) return 0.0;
    switch (noise.family) {
      case NoiseModel::Family::Gaussian:
        return noise.sigma * next_gaussian();
      case NoiseModel::Family::BoundedUniform:
        return noise.sigma * (2.0 * next_uniform() - 1.0);
    }
    throw_config("unknown noise family");
  }

  // Categorical draw by inverse CDF walk; `probs` must be near-normalized.
  int sample_index(std::span<const double> probs) {
    double u = next_uniform();
    double cum = 0.0;
    int last_positive = -1;
    for (size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      cum += probs[i];
      last_positive = int(i);
      if (u < cum) return int(i);
    }
    if (last_positive < 0) throw_config("cannot sample from an all-zero probability vector");
    return last_positive;
  }

 private:
  static uint64_t mix_final(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static uint64_t mix(uint64_t z) { return mix_final(z + 0x9e3779b97f4a7c15ULL); }

  uint64_t state_ = 0;
};

}  // namespace smab
