#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace evonet {

/*----------------------------------------------------------------------------
 * Deterministic random streams.
 *
 * Reproducibility contract: a run is identified by (master_seed, stream
 * index), and every sample drawn from the resulting stream is bit-identical
 * across platforms and thread counts.  That rules out std:: distributions
 * (their algorithms are implementation-defined), so the few samplers we need
 * are written out explicitly.
 *
 * Generator: xoshiro256++ seeded through SplitMix64.  Stream derivation
 * hashes (master_seed, index) into the 256-bit state, which is the usual
 * recipe for independent replica streams keyed by an index.
 *--------------------------------------------------------------------------*/

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class rng_stream {
public:
  rng_stream() : rng_stream(0x853c49e6748fea9bULL, 0) {}

  rng_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t s = master_seed;
    // fold the index in through two splitmix steps so that streams with
    // nearby indices don't share low-entropy state
    std::uint64_t t = stream_index;
    s ^= splitmix64_next(t);
    for (int i = 0; i < 4; ++i) state_[i] = splitmix64_next(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /* uniform on [0,1) with 53 random bits */
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /* uniform on (0,1] — safe as a log() argument */
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential(double rate) {
    if (rate <= 0.0) throw std::domain_error("exponential: rate must be > 0");
    return -std::log(uniform_pos()) / rate;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /* unbiased integer in [0, n) (Lemire's multiply-shift with rejection) */
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("uniform_below: n must be > 0");
    while (true) {
      const std::uint64_t x = next_u64();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
      const std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo < n) {
        const std::uint64_t threshold = (0 - n) % n;
        if (lo < threshold) continue;
      }
      return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /* number of failures before the first success in Bernoulli(p) trials;
     exact geometric sample via inversion, used for skip-sampling */
  std::uint64_t geometric_skips(double p) {
    if (p >= 1.0) return 0;
    if (p <= 0.0) throw std::domain_error("geometric_skips: p must be > 0");
    const double u = uniform_pos();
    const double g = std::floor(std::log(u) / std::log1p(-p));
    // clamp pathological rounding; the callers bound the skip anyway
    if (g < 0.0) return 0;
    if (g >= 9.0e18) return static_cast<std::uint64_t>(9.0e18);
    return static_cast<std::uint64_t>(g);
  }

  /* exact Binomial(n, p) by counting geometric skips between successes;
     expected cost O(n·p + 1), which fits all our use sites (p is small) */
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (p <= 0.0 || n == 0) return 0;
    if (p >= 1.0) return n;
    std::uint64_t successes = 0;
    std::uint64_t pos = 0;
    while (true) {
      const std::uint64_t skip = geometric_skips(p);
      if (skip >= n - pos) break;
      pos += skip + 1;
      ++successes;
      if (pos >= n) break;
    }
    return successes;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

} // namespace evonet
