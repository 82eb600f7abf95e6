#pragma once

#include <cmath>
#include <cstdint>

namespace gl_lab::rng {

// SplitMix64-style counter-based generation. A stream is identified by
// (seed, tag) and its i-th word is a pure function of (stream, i), so output
// never depends on evaluation order or thread scheduling.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t fmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return fmix64(a + kGolden + fmix64(b + kGolden));
}

inline constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
  return mix(mix(a, b), c);
}

inline constexpr std::uint64_t stream(std::uint64_t seed, std::uint64_t tag) {
  return mix(seed, tag);
}

inline constexpr std::uint64_t word(std::uint64_t stream_id,
                                    std::uint64_t index) {
  return fmix64(stream_id + index * kGolden);
}

/// Maps a word to [0, 1) with 53 bits of mantissa.
inline double unit_double(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Maps a word to (0, 1]; safe as a log argument.
inline double positive_unit_double(std::uint64_t w) {
  return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

// Stream tags, one per object kind.
inline constexpr std::uint64_t kTagDesign = 0x6d61747269786473ULL;
inline constexpr std::uint64_t kTagNoise = 0x6e6f697365737464ULL;
inline constexpr std::uint64_t kTagSupport = 0x737570706f727470ULL;
inline constexpr std::uint64_t kTagPowerRestart = 0x706f776572726e64ULL;
inline constexpr std::uint64_t kTagChi2 = 0x6368693273717273ULL;

/// Sequential N(0,1) draws from a counter-based stream via Box-Muller;
/// the counter advances by two words per generated pair.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t tag)
      : stream_(stream(seed, tag)) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = positive_unit_double(word(stream_, counter_));
    const double u2 = unit_double(word(stream_, counter_ + 1));
    counter_ += 2;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Uniform draw in [0, bound) by 128-bit multiply-shift.
inline std::uint64_t bounded(std::uint64_t w, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(w) * bound) >> 64);
}

}  // namespace gl_lab::rng
