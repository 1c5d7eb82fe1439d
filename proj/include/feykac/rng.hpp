#pragma once

#include <cstdint>

namespace feykac {

// Every Brownian path is addressed by (master_seed, stream_id); the engine
// state depends on nothing else, so results do not depend on which worker
// draws which path.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Order-sensitive hash of two keys.
constexpr std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2)));
}

// The splitmix64 output sequence started at a hashed key. Cheap to seed, which
// matters with one engine per path.
class PathEngine {
 public:
  using result_type = std::uint64_t;

  explicit PathEngine(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9E3779B97F4A7C15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

inline PathEngine make_engine(const SeedSpec& seed) {
  return PathEngine(combine_keys(seed.master_seed, seed.stream_id));
}

}  // namespace feykac
