#include "seedkit/rng.hpp"

#include <cmath>

namespace seedkit {

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint32_t kPhiloxM0 = 0xd2511f53u;
constexpr std::uint32_t kPhiloxM1 = 0xcd9e8d57u;
constexpr std::uint32_t kPhiloxW0 = 0x9e3779b9u;
constexpr std::uint32_t kPhiloxW1 = 0xbb67ae85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c[2];
  c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
       std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  const std::uint64_t k = splitmix64(seed);
  const std::uint64_t s = splitmix64(stream ^ 0x5851f42d4c957f2dull);
  key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
  counter_ = {0, 0, std::uint32_t(s), std::uint32_t(s >> 32)};
}

void RngStream::refill() {
  block_ = counter_;
  std::array<std::uint32_t, 2> k = key_;
  for (int r = 0; r < 10; ++r) {
    philox_round(block_, k);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit block counter
  pos_ = 0;
}

RngStream::result_type RngStream::operator()() {
  if (pos_ >= 4) refill();
  return block_[pos_++];
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t lo = (*this)();
  const std::uint64_t hi = (*this)();
  return lo | (hi << 32);
}

double RngStream::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  const std::uint64_t limit = bound * ((~std::uint64_t(0)) / bound);
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r < limit) return r % bound;
  }
}

double RngStream::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - u keeps the argument of log strictly positive.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

RngStream RngStream::split(std::uint64_t tag) const {
  return RngStream(seed_, splitmix64(stream_) ^ splitmix64(tag ^ 0x3c6ef372fe94f82bull));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t run_stream_id(std::string_view dataset, std::string_view method,
                            std::uint64_t repeat) {
  std::uint64_t h = fnv1a64(dataset);
  h = splitmix64(h ^ fnv1a64(method));
  return splitmix64(h ^ repeat);
}

}  // namespace seedkit
