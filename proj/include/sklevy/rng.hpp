#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sklevy {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is identified by (seed, stream_id). The 128-bit counter holds
/// stream_id in its upper half and a block index in its lower half, so
/// streams with distinct ids never overlap and any replicate can be
/// regenerated independently of the others. Satisfies
/// UniformRandomBitGenerator with 64-bit output.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open();

  /// Unit-rate exponential.
  double exponential();

  /// Standard normal (Box-Muller, one normal per two uniforms).
  double normal();

  /// Number of 64-bit words drawn so far.
  std::uint64_t words_drawn() const { return words_drawn_; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  std::uint64_t words_drawn_ = 0;
};

/// Stream id for replicate `replicate` of ensemble cell `cell`.
constexpr std::uint64_t replicate_stream_id(std::uint32_t cell, std::uint32_t replicate) {
  return (static_cast<std::uint64_t>(cell) << 32) | replicate;
}

/// Raw Philox4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace sklevy
