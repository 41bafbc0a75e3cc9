#pragma once

#include <array>
#include <cstdint>

namespace levy {

/// Philox4x32-10 block function (Salmon et al., counter-based RNG).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The 64-bit seed is the Philox key and the
/// stream id occupies the upper half of the counter, so every (seed, stream_id)
/// pair addresses its own sequence of 2^64 blocks without any shared state.
/// Monte Carlo paths use their path index as stream id, which makes results
/// independent of how paths are distributed over workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_word_ = 4;
};

}  // namespace levy
