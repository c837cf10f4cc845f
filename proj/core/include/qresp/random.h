#ifndef QRESP_RANDOM_H_
#define QRESP_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qresp {

// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t Fnv1a64(std::string_view text);

// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t Mix64(std::uint64_t x);

// A reproducible random stream identified by (seed, key). The engine is
// std::mt19937_64 seeded with Mix64(seed ^ Fnv1a64(key)); doubles take the top
// 53 bits of one draw. Both steps are fully specified, so a stream yields the
// same values on every platform and in every language that implements them.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view key);

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double NextDouble();

  // Selection sampling (Knuth's Algorithm S): `count` distinct indices from
  // [0, population), returned in increasing order.
  std::vector<std::size_t> SampleIndices(std::size_t population, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qresp

#endif  // QRESP_RANDOM_H_
