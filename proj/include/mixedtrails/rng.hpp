#ifndef MIXEDTRAILS_RNG_HPP
#define MIXEDTRAILS_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace mixedtrails::rng {

// SplitMix64 (Steele, Lea, Flood). Used for seeding and stream derivation.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256** (Blackman, Vigna), state seeded through SplitMix64.
// Integer-state generator; output sequences are identical on every platform,
// which all dataset generation and sampling reproducibility relies on.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  // Stream for (seed, stream_id, index): the three words are chained through
  // SplitMix64 so distinct tuples give unrelated states.
  static Xoshiro256 substream(std::uint64_t seed, std::uint64_t stream_id,
                              std::uint64_t index) {
    SplitMix64 sm(seed);
    std::uint64_t s = sm.next();
    sm.state = s ^ (stream_id * 0x9E3779B97F4A7C15ULL);
    s = sm.next();
    sm.state = s ^ (index * 0xD1B54A32D192ED03ULL);
    return Xoshiro256(sm.next());
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_;
};

// Index into `weights` drawn proportionally to the (non-negative) weights.
inline int sample_categorical(Xoshiro256& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("sample_categorical: zero total weight");
  const double u = rng.next_double() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u can land on the last bucket through rounding of acc
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

// Gamma(shape, 1) via Marsaglia-Tsang squeeze; the shape<1 case is boosted
// from shape+1 in the standard way.
inline double sample_gamma(Xoshiro256& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = rng.next_double();
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    // standard normal via Box-Muller (polar-free, uses two uniforms)
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double x = r * std::cos(6.283185307179586477 * u2);
    const double v0 = 1.0 + c * x;
    if (v0 <= 0.0) continue;
    const double v = v0 * v0 * v0;
    const double u = rng.next_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double sample_beta(Xoshiro256& rng, double a, double b) {
  if (a == 1.0 && b == 1.0) return rng.next_double();
  const double x = sample_gamma(rng, a);
  const double y = sample_gamma(rng, b);
  return x / (x + y);
}

inline void sample_dirichlet(Xoshiro256& rng, std::span<const double> alpha,
                             std::span<double> out) {
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = sample_gamma(rng, alpha[i]);
    total += out[i];
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] /= total;
}

}  // namespace mixedtrails::rng

#endif
