#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string_view>

namespace opg {

/// One splitmix64 scrambling round; the basis for deriving stream keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, so stream keys can be salted with short tags like "data".
constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {
constexpr std::uint64_t key_part(std::uint64_t v) noexcept { return v; }
constexpr std::uint64_t key_part(std::int64_t v) noexcept { return static_cast<std::uint64_t>(v); }
constexpr std::uint64_t key_part(int v) noexcept { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }
constexpr std::uint64_t key_part(std::string_view v) noexcept { return hash_tag(v); }
inline std::uint64_t key_part(const char* v) noexcept { return hash_tag(v); }
}  // namespace detail

/// Derives a stream key from a seed and any number of parts (indices, tags).
/// Order-sensitive: stream_key(s, 1, 2) != stream_key(s, 2, 1).
constexpr std::uint64_t stream_key(std::uint64_t seed) noexcept { return mix64(seed); }

template <typename Part, typename... Rest>
constexpr std::uint64_t stream_key(std::uint64_t seed, Part part, Rest... rest) {
  return stream_key(mix64(seed ^ mix64(detail::key_part(part) + 0x632be59bd9b4e019ULL)), rest...);
}

/// Seedable generator with explicit uniform/normal conversions, so that draw
/// sequences are a pure function of the stream key. Each logical unit of work
/// (one trajectory, one fold split, one corruption table) gets its own Rng
/// from stream_key, which makes results independent of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(key) {}

  template <typename... Parts>
  static Rng from(std::uint64_t seed, Parts... parts) {
    return Rng(stream_key(seed, parts...));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace opg
