#pragma once

#include <cmath>
#include <cstdint>

namespace livo {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so streams are reproducible across platforms
// and independent of evaluation order or thread count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double uniform() { return uniform_at(counter_++); }

  // Standard normal via Box-Muller; consumes two counter slots.
  double normal() {
    const double u1 = uniform_at(counter_++);
    const double u2 = uniform_at(counter_++);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  double uniform_at(std::uint64_t counter) const {
    const std::uint64_t bits = mix(seed_ ^ rotl(stream_, 17), counter);
    // 53-bit mantissa in (0, 1]; never returns 0 so log() above is safe.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix(splitmix(a) ^ rotl(splitmix(b), 23));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// Stream ids keep independent noise channels from colliding.
namespace rng_stream {
constexpr std::uint64_t kLidarRange = 1;
constexpr std::uint64_t kImageNoise = 2;
constexpr std::uint64_t kImuGyro = 3;
constexpr std::uint64_t kImuAccel = 4;
constexpr std::uint64_t kImuGyroWalk = 5;
constexpr std::uint64_t kImuAccelWalk = 6;
constexpr std::uint64_t kReservoir = 7;

inline std::uint64_t indexed(std::uint64_t base, std::uint64_t index) {
  return (base << 40) ^ index;
}
}  // namespace rng_stream

}  // namespace livo
