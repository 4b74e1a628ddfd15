#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace commtrust {

struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;

  friend std::ostream& operator<<(std::ostream& os, NodeId id) {
    return os << id.value;
  }
};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

}  // namespace commtrust

template <>
struct std::hash<commtrust::NodeId> {
  std::size_t operator()(commtrust::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
