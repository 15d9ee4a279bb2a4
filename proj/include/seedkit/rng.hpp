#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace seedkit {

/// Counter-based Philox4x32-10 generator (Salmon et al., SC'11).
///
/// Streams are addressed by (seed, stream id): two streams with different ids
/// are statistically independent, cheap to construct, and advancing one never
/// touches another. This is what lets benchmark repeats run concurrently
/// while staying bit-reproducible: adding a method or dataset never perturbs
/// the draws of any existing run.
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()();

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double();

  /// Uniform integer in [0, bound). Unbiased; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal deviate (Box-Muller, pair cached).
  double next_normal();

  /// Independent child stream; deterministic function of (this stream, tag).
  RngStream split(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view s);

/// Stream id for one benchmark run, derived from the run's coordinates.
std::uint64_t run_stream_id(std::string_view dataset, std::string_view method,
                            std::uint64_t repeat);

}  // namespace seedkit
