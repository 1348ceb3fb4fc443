#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace zonemon {

// Thin sampling layer over mt19937_64. The standard distributions are
// implementation-defined, so pinned regression values (record counts,
// stream bytes) go through these fixed transforms instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // uniform in (0, 1]
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) { return -mean * std::log(uniform01()); }

  double gaussian(double mean, double stddev) {
    // Box-Muller, one draw per call pair
    if (have_spare_) {
      have_spare_ = false;
      return mean + stddev * spare_;
    }
    const double u = uniform01();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return mean + stddev * r * std::cos(2.0 * M_PI * v);
  }

  uint32_t below(uint32_t n) { return static_cast<uint32_t>(gen_() % n); }

  // index into a weight table (weights need not be normalized)
  size_t weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform01() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      x -= weights[i];
      if (x <= 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace zonemon
