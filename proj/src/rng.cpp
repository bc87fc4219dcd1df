#include "levylab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levylab {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint32_t path_id,
                     std::uint32_t substream)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
      id_{path_id, substream} {}

std::array<std::uint32_t, 4> RngStream::block(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMult0, c[0], hi0, lo0);
    mul_hi_lo(kMult1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> counter = {
      std::uint32_t(block_index_), std::uint32_t(block_index_ >> 32), id_[0],
      id_[1]};
  buf_ = block(counter, key_);
  ++block_index_;
  avail_ = 4;
}

std::uint64_t RngStream::next_u64() {
  if (avail_ < 2) refill();
  const std::uint64_t lo = buf_[4 - avail_];
  const std::uint64_t hi = buf_[4 - avail_ + 1];
  avail_ -= 2;
  return (hi << 32) | lo;
}

double RngStream::uniform01() {
  // 53 random bits, shifted into (0,1) by half an ulp of the grid.
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  has_cached_normal_ = true;
  return r * std::cos(angle);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::domain_error("RngStream: rate must be > 0");
  return -std::log(uniform01()) / rate;
}

std::uint64_t RngStream::stream_id() const {
  return (std::uint64_t(id_[0]) << 32) | id_[1];
}

}  // namespace levylab
