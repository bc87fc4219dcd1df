#pragma once

#include <array>
#include <cstdint>

namespace levylab {

/// Counter-based random stream (Philox 4x32, 10 rounds).
///
/// One instance is one logical stream, addressed by (seed, path_id,
/// substream).  Every 128-bit block is a pure function of that address and
/// of the draw counter, so a path's randomness does not depend on how many
/// worker threads are running or in which order paths are generated.
/// Distinct (path_id, substream) pairs never share a block.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint32_t path_id,
            std::uint32_t substream = 0);

  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0, 1); never returns an endpoint.
  double uniform01();

  /// Standard normal via Box-Muller; draws are paired internally.
  double normal();

  /// Exponential with the given rate (rate > 0).
  double exponential(double rate);

  /// 64-bit stream identifier, (path_id << 32) | substream.
  std::uint64_t stream_id() const;

  /// One raw 4x32 block for the given counter; exposed for known-answer
  /// tests against the published Philox vectors.
  static std::array<std::uint32_t, 4> block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Substream ids above this value are reserved for internal statistical
// machinery (bootstrap resampling, permutation tests, map validation) so
// they can never collide with per-component path substreams.
inline constexpr std::uint32_t kReservedSubstreamBase = 0xF0000000u;

}  // namespace levylab
