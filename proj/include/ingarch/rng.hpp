#pragma once

#include <cstdint>

namespace ingarch {

// Counter-based splittable generator: a SplitMix64 finalizer applied to a
// keyed Weyl sequence. The same (seed, stream_id) always reproduces the same
// draw sequence, and distinct stream_ids give statistically independent
// streams, so per-entity or per-path streams can be consumed in any order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed),
        stream_id_(stream_id),
        key_(mix(seed ^ mix(stream_id ^ 0x1d8e4e27c47d124fULL))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(key_ + counter_);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1); never returns an endpoint.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Derives an independent child stream; a pure function of the stream
  /// identity and child_id, not of the parent's position.
  RngStream split(std::uint64_t child_id) const {
    return RngStream(key_, mix(child_id ^ 0x94d049bb133111ebULL));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ingarch
