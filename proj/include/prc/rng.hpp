#pragma once

#include <cstdint>

namespace prc {

/// Counter-based deterministic random stream in the splitmix64 family.
///
/// A stream is identified by (seed, stream_id): equal pairs produce
/// bit-identical output sequences, distinct ids give streams that are
/// independent for statistical purposes. Trial loops derive one substream
/// per work unit so results do not depend on scheduling or thread count.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(uint64_t seed, uint64_t stream_id = 0) {
    base_ = mix(seed + GOLDEN) ^ mix(stream_id * WEYL + 0x632be59bd9b4e019ULL);
    state_ = base_;
  }

  uint64_t next_u64() {
    state_ += GOLDEN;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, n). Requires n >= 1.
  uint64_t next_below(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t thresh = (0 - n) % n;
      while (lo < thresh) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return next_double() < p;
  }

  /// 64 bits, each independently Ber(p), exact in the real value of p.
  ///
  /// Lanes compare a lazily generated uniform binary fraction against the
  /// binary expansion of p, most significant bit first; a lane is decided at
  /// the first differing bit. Expected word consumption is ~2 regardless of p.
  uint64_t bernoulli_word(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~uint64_t{0};
    uint64_t result = 0;
    uint64_t undecided = ~uint64_t{0};
    double frac = p;
    while (undecided) {
      frac *= 2.0;
      bool bit = frac >= 1.0;
      if (bit) frac -= 1.0;
      uint64_t r = next_u64();
      if (bit) {
        result |= undecided & ~r;
        undecided &= r;
      } else {
        undecided &= ~r;
      }
      if (frac == 0.0) break;  // p exhausted; remaining lanes have U >= p
    }
    return result;
  }

  /// Independent child stream; a function of the stream identity only,
  /// not of how much of this stream has been consumed.
  RngStream substream(uint64_t id) const {
    RngStream child;
    child.base_ = mix(base_ + (id + 1) * WEYL);
    child.state_ = child.base_;
    return child;
  }

 private:
  static constexpr uint64_t GOLDEN = 0x9e3779b97f4a7c15ULL;
  static constexpr uint64_t WEYL = 0xd1342543de82ef95ULL;

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t base_;
  uint64_t state_;
};

}  // namespace prc
