#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lplab {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// Block k of stream s under seed S is philox4x32((k_lo, k_hi, s_lo, s_hi),
/// S), so distinct stream indices address disjoint counter ranges and need
/// no jump-ahead. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_index, std::uint64_t block = 0)
      : seed_(seed), stream_(stream_index), block_(block) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard Gaussian by inversion of a uniform.
  double gaussian();
  /// |g| for a standard Gaussian g.
  double abs_gaussian();
  /// Standard exponential.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }
  /// Index of the next unused counter block.
  std::uint64_t position() const { return block_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 2;  // 64-bit words consumed from buffer_
};

}  // namespace lplab
