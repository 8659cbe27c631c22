#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

namespace hampack {

using Seed = std::uint64_t;

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace detail

/// Derives an independent sub-stream seed from a master seed, a stage tag and
/// up to two integer indices (e.g. cycle slot and layer step).
constexpr Seed derive_seed(Seed master, std::string_view tag, std::uint64_t a = 0,
                           std::uint64_t b = 0) noexcept {
  std::uint64_t h = detail::mix64(master + detail::kGolden);
  h = detail::mix64(h ^ detail::fnv1a(tag));
  h = detail::mix64(h ^ (a * detail::kGolden + 0x632BE59BD9B4E019ULL));
  h = detail::mix64(h ^ (b * 0xD6E8FEB86659FD93ULL + 0x8CB92BA72F3D8DD7ULL));
  return h;
}

/// Counter-based generator: output i is a pure function of (key, i), so a
/// stream can be re-created anywhere from its key. Named and versioned so
/// that reports can state exactly which generator produced them.
///
/// All derived quantities (bounded integers, unit doubles, shuffles) are
/// computed here rather than through <random> distributions, which keeps
/// results bit-identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kName = "splitmix64-ctr";
  static constexpr int kVersion = 1;

  explicit constexpr Rng(Seed key) noexcept : key_(detail::mix64(key ^ 0xA0761D6478BD642FULL)) {}

  static constexpr Rng stream(Seed master, std::string_view tag, std::uint64_t a = 0,
                              std::uint64_t b = 0) noexcept {
    return Rng(derive_seed(master, tag, a, b));
  }

  /// A child stream independent of this one and of its other children.
  [[nodiscard]] constexpr Rng split(std::string_view tag, std::uint64_t a = 0,
                                    std::uint64_t b = 0) const noexcept {
    return Rng(derive_seed(key_, tag, a, b));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  /// Uniform integer in [0, bound). bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless rejection method.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as the argument of log().
  constexpr double uniform_open0() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p) noexcept {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  template <class T>
  constexpr void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hampack
