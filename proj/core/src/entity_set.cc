#include "qresp/entity_set.h"

#include <algorithm>
#include <bit>
#include <iterator>
#include <string>

#include "qresp/error.h"

namespace qresp {
namespace {

std::size_t WordCount(std::size_t universe) { return (universe + 63) / 64; }

bool TestBit(const std::vector<std::uint64_t>& words, std::uint32_t id) {
  return (words[id >> 6] >> (id & 63)) & 1U;
}

std::vector<std::uint64_t> SparseToWords(std::size_t universe,
                                         const std::vector<std::uint32_t>& ids) {
  std::vector<std::uint64_t> words(WordCount(universe), 0);
  for (std::uint32_t id : ids) words[id >> 6] |= std::uint64_t{1} << (id & 63);
  return words;
}

std::size_t PopCount(const std::vector<std::uint64_t>& words) {
  std::size_t n = 0;
  for (std::uint64_t w : words) n += std::popcount(w);
  return n;
}

}  // namespace

EntitySet EntitySet::FromSorted(std::size_t universe,
                                std::vector<std::uint32_t> ids) {
  EntitySet s(universe);
  if (!ids.empty() && ids.back() >= universe) {
    throw Error(ErrorCode::kDomain, "entity id " + std::to_string(ids.back()) +
                                        " outside universe of " +
                                        std::to_string(universe));
  }
  s.count_ = ids.size();
  s.ids_ = std::move(ids);
  s.Normalize();
  return s;
}

EntitySet EntitySet::FromIds(std::size_t universe,
                             std::span<const EntityId> ids) {
  std::vector<std::uint32_t> raw;
  raw.reserve(ids.size());
  for (EntityId id : ids) raw.push_back(id.value);
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  return FromSorted(universe, std::move(raw));
}

bool EntitySet::contains(EntityId id) const {
  if (id.value >= universe_) return false;
  if (dense_) return TestBit(words_, id.value);
  return std::binary_search(ids_.begin(), ids_.end(), id.value);
}

void EntitySet::insert(EntityId id) {
  if (id.value >= universe_) {
    throw Error(ErrorCode::kDomain, "entity id " + std::to_string(id.value) +
                                        " outside universe of " +
                                        std::to_string(universe_));
  }
  if (dense_) {
    std::uint64_t& word = words_[id.value >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (id.value & 63);
    if ((word & mask) == 0) {
      word |= mask;
      ++count_;
    }
    return;
  }
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id.value);
  if (it != ids_.end() && *it == id.value) return;
  ids_.insert(it, id.value);
  ++count_;
  Normalize();
}

void EntitySet::CheckSameUniverse(const EntitySet& other) const {
  if (universe_ != other.universe_) {
    throw Error(ErrorCode::kDomain,
                "entity set universe mismatch: " + std::to_string(universe_) +
                    " vs " + std::to_string(other.universe_));
  }
}

void EntitySet::ToDense() {
  if (dense_) return;
  words_ = SparseToWords(universe_, ids_);
  ids_.clear();
  ids_.shrink_to_fit();
  dense_ = true;
}

void EntitySet::Normalize() {
  // An id array costs 32 bits per member, the bitmap one bit per universe slot.
  const bool want_dense = universe_ > 0 && count_ * 32 >= universe_;
  if (want_dense == dense_) return;
  if (want_dense) {
    ToDense();
    return;
  }
  std::vector<std::uint32_t> ids;
  ids.reserve(count_);
  ForEach([&](EntityId id) { ids.push_back(id.value); });
  ids_ = std::move(ids);
  words_.clear();
  words_.shrink_to_fit();
  dense_ = false;
}

EntitySet& EntitySet::operator&=(const EntitySet& other) {
  CheckSameUniverse(other);
  if (!dense_ && !other.dense_) {
    std::vector<std::uint32_t> out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(),
                          other.ids_.end(), std::back_inserter(out));
    ids_ = std::move(out);
    count_ = ids_.size();
  } else if (!dense_) {
    std::erase_if(ids_, [&](std::uint32_t id) { return !TestBit(other.words_, id); });
    count_ = ids_.size();
  } else if (!other.dense_) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t id : other.ids_) {
      if (TestBit(words_, id)) out.push_back(id);
    }
    words_.clear();
    dense_ = false;
    ids_ = std::move(out);
    count_ = ids_.size();
  } else {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    count_ = PopCount(words_);
  }
  Normalize();
  return *this;
}

EntitySet& EntitySet::operator|=(const EntitySet& other) {
  CheckSameUniverse(other);
  if (!dense_ && !other.dense_) {
    std::vector<std::uint32_t> out;
    out.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                   other.ids_.end(), std::back_inserter(out));
    ids_ = std::move(out);
    count_ = ids_.size();
  } else {
    ToDense();
    if (other.dense_) {
      for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    } else {
      for (std::uint32_t id : other.ids_) {
        words_[id >> 6] |= std::uint64_t{1} << (id & 63);
      }
    }
    count_ = PopCount(words_);
  }
  Normalize();
  return *this;
}

EntitySet& EntitySet::operator-=(const EntitySet& other) {
  CheckSameUniverse(other);
  if (!dense_) {
    std::erase_if(ids_, [&](std::uint32_t id) { return other.contains(EntityId{id}); });
    count_ = ids_.size();
  } else if (!other.dense_) {
    for (std::uint32_t id : other.ids_) {
      words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63));
    }
    count_ = PopCount(words_);
  } else {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
    count_ = PopCount(words_);
  }
  Normalize();
  return *this;
}

std::size_t EntitySet::IntersectionCount(const EntitySet& other) const {
  CheckSameUniverse(other);
  if (dense_ && other.dense_) {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      n += std::popcount(words_[w] & other.words_[w]);
    }
    return n;
  }
  const EntitySet& sparse = dense_ ? other : *this;
  const EntitySet& probe = dense_ ? *this : other;
  std::size_t n = 0;
  for (std::uint32_t id : sparse.ids_) n += probe.contains(EntityId{id});
  return n;
}

bool EntitySet::Intersects(const EntitySet& other) const {
  CheckSameUniverse(other);
  if (dense_ && other.dense_) {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & other.words_[w]) return true;
    }
    return false;
  }
  const EntitySet& sparse = dense_ ? other : *this;
  const EntitySet& probe = dense_ ? *this : other;
  for (std::uint32_t id : sparse.ids_) {
    if (probe.contains(EntityId{id})) return true;
  }
  return false;
}

bool EntitySet::IsSubsetOf(const EntitySet& other) const {
  CheckSameUniverse(other);
  if (count_ > other.count_) return false;
  if (dense_ && other.dense_) {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & ~other.words_[w]) return false;
    }
    return true;
  }
  if (!dense_) {
    for (std::uint32_t id : ids_) {
      if (!other.contains(EntityId{id})) return false;
    }
    return true;
  }
  // Unreachable after the count check (a dense set always outnumbers a sparse
  // one over the same universe), kept for completeness.
  bool ok = true;
  ForEach([&](EntityId id) { ok = ok && other.contains(id); });
  return ok;
}

std::vector<EntityId> EntitySet::ToVector() const {
  std::vector<EntityId> out;
  out.reserve(count_);
  ForEach([&](EntityId id) { out.push_back(id); });
  return out;
}

bool operator==(const EntitySet& a, const EntitySet& b) {
  if (a.universe_ != b.universe_ || a.count_ != b.count_) return false;
  // Normalize() makes the representation a function of (universe, count).
  if (a.dense_) return a.words_ == b.words_;
  return a.ids_ == b.ids_;
}

}  // namespace qresp
