#pragma once

#include <array>
#include <cstdint>

namespace framelab {

// SplitMix64 finalizer; used to derive Philox keys from (seed, stream).
std::uint64_t mix64(std::uint64_t z);

// Counter-based generator: Philox4x32-10 (Salmon et al., SC 2011).
//
// The per-stream key is mix64(master_seed ^ mix64(stream_index)), split into
// two 32-bit words. The 128-bit counter starts at zero and increments once
// per block of four 32-bit outputs. Identical (seed, stream) pairs therefore
// reproduce identical output sequences regardless of thread scheduling, and
// distinct streams are independent for practical purposes.
class SeededRng {
 public:
  SeededRng(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in {0, ..., bound-1}, rejection against modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Standard normal via Box-Muller; the paired variate is cached.
  double gaussian();
  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape);

 private:
  void refill();

  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_index_ = 0;
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace framelab
