#include "qresp/random.h"

#include <algorithm>

namespace qresp {

std::uint64_t Fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view key)
    : engine_(Mix64(seed ^ Fnv1a64(key))) {}

double RandomStream::NextDouble() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> RandomStream::SampleIndices(std::size_t population,
                                                     std::size_t count) {
  count = std::min(count, population);
  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (std::size_t i = 0; i < population && picked.size() < count; ++i) {
    const double needed = static_cast<double>(count - picked.size());
    const double left = static_cast<double>(population - i);
    if (left * NextDouble() < needed) picked.push_back(i);
  }
  return picked;
}

}  // namespace qresp
