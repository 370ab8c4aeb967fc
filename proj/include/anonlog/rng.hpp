#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "anonlog/error.hpp"

namespace anonlog {

// Deterministic random source. mt19937_64 is fully pinned by the C++ standard
// and the bound is applied by rejection sampling, so a seed reproduces the
// same draw sequence everywhere.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  static constexpr std::string_view algorithm() { return "mt19937_64/rejection-v1"; }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform draw from [0, n).
  std::size_t next_below(std::size_t n) {
    if (n == 0) throw ConfigError("cannot draw from an empty range");
    std::uint64_t bound = static_cast<std::uint64_t>(n);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = gen_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace anonlog
