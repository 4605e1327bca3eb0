#pragma once

#include <cstdint>

namespace randfem {

// splitmix64 finalizer (Steele/Lea/Flood constants, Vigna's public-domain code).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Tags separating the independent draw families of one replication. The
// resample tag is added on top of the original purpose when the singularity
// policy redraws a point.
enum class StreamPurpose : std::uint64_t {
  stiffness = 1,
  load_mc = 2,
  load_is = 3,
  quadrature = 4,
};

inline constexpr std::uint64_t kResampleTag = 16;

// Stream id for the variates of one (replication, triangle, local vertex,
// purpose) cell. Chained splitmix64 finalizers; two cells differing in any
// component yield unrelated ids.
inline std::uint64_t derive_stream(std::uint64_t replication, std::uint64_t triangle,
                                   std::uint64_t local_vertex, std::uint64_t purpose) {
  std::uint64_t h = mix64(purpose);
  h = mix64(h ^ replication);
  h = mix64(h ^ triangle);
  return mix64(h ^ local_vertex);
}

inline std::uint64_t derive_stream(std::uint64_t replication, std::uint64_t triangle,
                                   std::uint64_t local_vertex, StreamPurpose purpose,
                                   bool resample = false) {
  return derive_stream(replication, triangle, local_vertex,
                       static_cast<std::uint64_t>(purpose) + (resample ? kResampleTag : 0));
}

// Counter-based generator: a splitmix64 walk whose start is a hash of
// (seed, stream id). Identical (seed, stream id) gives an identical variate
// sequence regardless of thread count or evaluation order. Single owner;
// never share one instance across threads.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), state_(mix64(mix64(seed) ^ mix64(stream_id))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

} // namespace randfem
