#ifndef BILICOVER_RNG_HPP
#define BILICOVER_RNG_HPP

#include <cstdint>

namespace bilicover {

// splitmix64 step; used to expand seeds and to derive substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** by Blackman/Vigna, seeded through splitmix64.
//
// All randomness in the project flows through this generator so that
// instances, separation runs and benchmarks are bit-identical across
// platforms (std:: distributions are implementation-defined and never
// used). Substreams are derived by hashing (seed, tag, index) triples,
// e.g. one stream per instance row and one for the objective vectors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
    calls_ = 0;
  }

  std::uint64_t next_u64() {
    ++calls_;
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1): 53 random mantissa bits, exact dyadic rational.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n); n >= 1. Rejection-free multiply-shift is
  // biased for huge n; fine here (n is a row count or support size).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  // Number of raw draws made since construction/reseed (used by tests
  // that pin how many draws an operation may consume).
  std::uint64_t calls() const { return calls_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  std::uint64_t calls_ = 0;
};

// Substream key: collision-resistant enough for (tag, index) fan-out.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t index = 0) {
  std::uint64_t st = master;
  std::uint64_t h = splitmix64(st);
  st ^= tag * 0xd1b54a32d192ed03ULL;
  h ^= splitmix64(st);
  st ^= index + 0x2545f4914f6cdd1dULL;
  h ^= splitmix64(st);
  return h;
}

}  // namespace bilicover

#endif  // BILICOVER_RNG_HPP
