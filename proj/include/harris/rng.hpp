#pragma once

#include <cmath>
#include <cstdint>

namespace harris {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based Philox4x32-10 generator. Each (master_seed, stream) pair
// yields an independent, reproducible stream regardless of thread scheduling.
// Stream derivation is wrap-free: the 64-bit stream index keys the cipher
// directly, no state is shared between streams.
class CounterRng {
public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream) {
    const std::uint64_t k = detail::splitmix64(master_seed ^ detail::splitmix64(stream));
    key0_ = static_cast<std::uint32_t>(k);
    key1_ = static_cast<std::uint32_t>(k >> 32);
    ctr_hi_ = detail::splitmix64(stream + 0x632BE59BD9B4E019ULL);
    ctr_lo_ = 0;
    buf_pos_ = 4;
    have_normal_ = false;
  }

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) refill();
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // uniform in (0, 1)
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal (Box-Muller, pairs cached)
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(th);
    have_normal_ = true;
    return r * std::cos(th);
  }

private:
  static void philox_round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2,
                           std::uint32_t& c3, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ULL * c0;
    const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
    const std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t l0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t l1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = h1 ^ c1 ^ k0;
    const std::uint32_t n2 = h0 ^ c3 ^ k1;
    c0 = n0;
    c1 = l1;
    c2 = n2;
    c3 = l0;
  }

  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo_);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi_);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi_ >> 32);
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int r = 0; r < 10; ++r) {
      philox_round(c0, c1, c2, c3, k0, k1);
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = c0;
    buf_[1] = c1;
    buf_[2] = c2;
    buf_[3] = c3;
    ++ctr_lo_;
    buf_pos_ = 0;
  }

  std::uint32_t key0_, key1_;
  std::uint64_t ctr_hi_, ctr_lo_;
  std::uint32_t buf_[4];
  int buf_pos_;
  bool have_normal_;
  double cached_ = 0.0;
};

// Deterministic per-replica stream: stream = hash(master_seed, index).
inline CounterRng seed_stream(std::uint64_t master_seed, std::uint64_t replica_index) {
  return CounterRng(master_seed, replica_index);
}

}  // namespace harris
