#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

// Counter-based random numbers (Philox4x32-10).  Every draw is a pure
// function of (seed, stream, position), so independent streams can be handed
// to parallel workers and any simulation is reproducible bit-for-bit no
// matter how the work is scheduled.

namespace greencell {

class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  // One application of the 10-round block cipher; exposed for known-answer
  // tests.
  static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
      const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      const std::array<std::uint32_t, 4> out = encrypt(
          {static_cast<std::uint32_t>(block_),
           static_cast<std::uint32_t>(block_ >> 32),
           static_cast<std::uint32_t>(stream_),
           static_cast<std::uint32_t>(stream_ >> 32)},
          key_);
      buffer_[0] = out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
      buffer_[1] = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
      ++block_;
      have_ = 2;
    }
    return buffer_[2 - have_--];
  }

  // Uniform on the open interval (0, 1): (k + 1/2) * 2^-53 over the top 53
  // bits.  Never returns 0 or 1, so log and inverse-CDF transforms stay
  // finite.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unit-mean exponential.
  double next_exponential() { return -std::log1p(-next_double()); }

  // Standard uniform-random-bit-generator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int have_ = 0;
};

// Exact Poisson sampling by uniform products.  The mean is consumed in
// chunks small enough that exp(-chunk) stays comfortably above the smallest
// normal double, so the method is exact for any finite mean.
template <class Rng>
std::uint64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
  }
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double chunk = mean < 500.0 ? mean : 500.0;
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double product = 1.0;
    for (;;) {
      product *= rng.next_double();
      if (product <= limit) {
        break;
      }
      ++total;
    }
  }
  return total;
}

}  // namespace greencell
