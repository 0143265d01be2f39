#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace rrsem {

// Strongly typed identifiers. Each kind is issued from its own monotone
// counter, so ordering by value is ordering by creation.
template <class Tag_>
struct Id {
  std::uint64_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t v) : value(v) {}

  constexpr bool valid() const { return value != 0; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

struct PidTag {};
struct MsgTag {};
struct CheckTag {};

using Pid = Id<PidTag>;
using Tag = Id<MsgTag>;
using CheckId = Id<CheckTag>;

inline std::ostream& operator<<(std::ostream& os, Pid p) { return os << "p" << p.value; }
inline std::ostream& operator<<(std::ostream& os, Tag t) { return os << "l" << t.value; }
inline std::ostream& operator<<(std::ostream& os, CheckId c) { return os << "t" << c.value; }

}  // namespace rrsem

template <class T>
struct std::hash<rrsem::Id<T>> {
  std::size_t operator()(rrsem::Id<T> id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};
