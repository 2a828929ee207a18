#ifndef SELFADJUST_RANDOM_HPP
#define SELFADJUST_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace selfadjust {

/// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard,
/// and the bounded draws below avoid std::uniform_int_distribution, whose
/// output is implementation-defined. Identical seeds give identical streams
/// on every platform, which the byte-stable CSV contract relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform integer in [lo, hi], inclusive; unbiased via rejection.
  std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;
    if (range == 0) return eng_();  // full 64-bit range
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
      const std::uint64_t r = eng_();
      if (r >= threshold) return lo + r % range;
    }
  }

  std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_u64(0, static_cast<std::uint64_t>(hi - lo)));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Log-uniform over [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    const double u = uniform_real();
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_u64(0, i - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// 1..n as a seeded random permutation.
  static std::vector<std::int64_t> permutation(std::int64_t n,
                                               std::uint64_t seed) {
    std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = i + 1;
    Rng rng(seed);
    rng.shuffle(keys);
    return keys;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace selfadjust

#endif  // SELFADJUST_RANDOM_HPP
