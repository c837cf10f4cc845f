#ifndef QRESP_ENTITY_SET_H_
#define QRESP_ENTITY_SET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qresp/ids.h"

namespace qresp {

// A set of EntityIds drawn from a fixed universe [0, universe()).
//
// Storage is chosen per set from the cardinality: sparse sets keep a sorted
// id array, dense sets keep a bitmap of universe() bits. The choice is
// invisible to callers; two sets compare equal iff they hold the same ids over
// the same universe. size() is cached and always equals the number of members.
// No operation changes the universe width, and binary operations require both
// operands to share it.
class EntitySet {
 public:
  EntitySet() = default;
  explicit EntitySet(std::size_t universe) : universe_(universe) {}

  // `ids` must be strictly increasing and below `universe`.
  static EntitySet FromSorted(std::size_t universe,
                              std::vector<std::uint32_t> ids);
  // Any order, duplicates allowed.
  static EntitySet FromIds(std::size_t universe, std::span<const EntityId> ids);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(EntityId id) const;
  void insert(EntityId id);

  EntitySet& operator&=(const EntitySet& other);
  EntitySet& operator|=(const EntitySet& other);
  EntitySet& operator-=(const EntitySet& other);

  friend EntitySet operator&(EntitySet a, const EntitySet& b) { return a &= b; }
  friend EntitySet operator|(EntitySet a, const EntitySet& b) { return a |= b; }
  friend EntitySet operator-(EntitySet a, const EntitySet& b) { return a -= b; }

  std::size_t IntersectionCount(const EntitySet& other) const;
  bool Intersects(const EntitySet& other) const;
  bool IsSubsetOf(const EntitySet& other) const;

  // Members in increasing id order.
  std::vector<EntityId> ToVector() const;

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    if (!dense_) {
      for (std::uint32_t id : ids_) fn(EntityId{id});
      return;
    }
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        fn(EntityId{static_cast<std::uint32_t>(w * 64 + bit)});
        bits &= bits - 1;
      }
    }
  }

  bool is_dense() const { return dense_; }

  friend bool operator==(const EntitySet& a, const EntitySet& b);

 private:
  void CheckSameUniverse(const EntitySet& other) const;
  void ToDense();
  // Re-selects the representation after a mutation.
  void Normalize();

  std::size_t universe_ = 0;
  std::size_t count_ = 0;
  bool dense_ = false;
  std::vector<std::uint32_t> ids_;
  std::vector<std::uint64_t> words_;
};

}  // namespace qresp

#endif  // QRESP_ENTITY_SET_H_
