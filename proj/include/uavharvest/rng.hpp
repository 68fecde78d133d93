#pragma once

#include <cmath>
#include <cstdint>

namespace uavharvest {

// 64-bit finalizer (Stafford mix 13). Used both as the output function of the
// generator and to derive independent stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= UINT64_C(0xBF58476D1CE4E5B9);
  z ^= z >> 27;
  z *= UINT64_C(0x94D049BB133111EB);
  z ^= z >> 31;
  return z;
}

// Counter-based splittable generator in the splitmix64 family: the state is a
// counter advanced by the golden gamma and the output is a strong mix of it.
// Streams are derived by hashing (seed, ids...) so that e.g. per-(trial,
// window) streams are independent and insensitive to how many other streams
// a run touches.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) : state_(stream_key) {}

  std::uint64_t next_u64() {
    state_ += UINT64_C(0x9E3779B97F4A7C15);
    return mix64(state_);
  }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_unit_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  double exponential(double mean) { return -mean * std::log(next_unit_pos()); }

  // Gamma(shape, scale) for integer shape: scale * -log(prod of uniforms).
  double gamma_int(int shape, double scale) {
    double prod = 1.0;
    for (int i = 0; i < shape; ++i) prod *= next_unit_pos();
    return -scale * std::log(prod);
  }

  bool bernoulli(double prob) { return next_unit() < prob; }

  long poisson(double mean);

 private:
  std::uint64_t state_;
};

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t k = mix64(seed + UINT64_C(0x9E3779B97F4A7C15));
  k = mix64(k ^ (a + UINT64_C(0xD1B54A32D192ED03)));
  k = mix64(k ^ (b + UINT64_C(0x8CB92BA72F3D8DD7)));
  k = mix64(k ^ (c + UINT64_C(0xABC98388FB8FAC03)));
  return k;
}

// Packs a (possibly negative) 1-D or 2-D window index into a stream id.
inline std::uint64_t window_stream_id(long i, long j = 0) {
  auto zigzag = [](long x) {
    return static_cast<std::uint64_t>((x << 1) ^ (x >> (sizeof(long) * 8 - 1)));
  };
  return zigzag(i) | (zigzag(j) << 32);
}

inline long Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    // Knuth multiplication, O(mean) uniforms.
    const double limit = std::exp(-mean);
    long k = 0;
    double prod = next_unit_pos();
    while (prod > limit) {
      ++k;
      prod *= next_unit_pos();
    }
    return k;
  }
  // Transformed rejection with squeeze (PTRS, Hoermann 1993); O(1) per draw.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = next_unit() - 0.5;
    double v = next_unit_pos();
    double us = 0.5 - std::abs(u);
    double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kd * log_mean - mean - std::lgamma(kd + 1.0)) {
      return static_cast<long>(kd);
    }
  }
}

}  // namespace uavharvest
