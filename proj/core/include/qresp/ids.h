#ifndef QRESP_IDS_H_
#define QRESP_IDS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace qresp {

// Dense handle for a taxonomy type. Ids are contiguous from 0 in interning
// order.
struct TypeId {
  std::uint32_t value = 0;
  friend auto operator<=>(TypeId, TypeId) = default;
};

// Dense handle for an entity. Ids are contiguous from 0 in interning order.
struct EntityId {
  std::uint32_t value = 0;
  friend auto operator<=>(EntityId, EntityId) = default;
};

}  // namespace qresp

template <>
struct std::hash<qresp::TypeId> {
  std::size_t operator()(qresp::TypeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<qresp::EntityId> {
  std::size_t operator()(qresp::EntityId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // QRESP_IDS_H_
