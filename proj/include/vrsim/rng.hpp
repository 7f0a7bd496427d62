#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace vrsim {

// All randomness in a run flows from one 64-bit seed, forked into named
// sub-streams so that e.g. extra fading draws never perturb the request
// sequence. Stream identity = FNV-1a over (seed, name, indices).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::string_view name,
                    std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
      }
    };
    mix(seed);
    for (char c : name) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001b3ull;
    }
    mix(a);
    mix(b);
    return Rng(h);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53-bit resolution; portable across platforms.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = n * ((~0ull) / n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Unit-mean exponential (Rayleigh fading power).
  double exponential() { return -std::log(1.0 - uniform()); }

  // Symmetric Dirichlet(1): normalized unit exponentials.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
      x = exponential();
      sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vrsim
