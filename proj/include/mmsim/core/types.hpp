#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string_view>

namespace mmsim {

using Volume = std::int64_t;
using OrderId = std::uint64_t;
using Seq = std::uint64_t;

enum class Side : std::uint8_t { Bid, Ask };
enum class Owner : std::uint8_t { Historical, Agent };

constexpr Side opposite(Side s) noexcept { return s == Side::Bid ? Side::Ask : Side::Bid; }

constexpr std::string_view to_string(Side s) noexcept { return s == Side::Bid ? "bid" : "ask"; }
constexpr std::string_view to_string(Owner o) noexcept {
  return o == Owner::Historical ? "historical" : "agent";
}

// Price on a half-tick integer grid: price = value * tick_size / 2.
// Tradable prices have even value; the reference price always has odd value.
struct HalfTickPrice {
  std::int64_t value = 0;

  constexpr bool on_tick() const noexcept { return (value & 1) == 0; }
  constexpr bool between_ticks() const noexcept { return (value & 1) != 0; }

  static constexpr HalfTickPrice from_ticks(std::int64_t ticks) noexcept { return {ticks * 2}; }

  constexpr HalfTickPrice operator+(std::int64_t half_ticks) const noexcept {
    return {value + half_ticks};
  }
  constexpr HalfTickPrice operator-(std::int64_t half_ticks) const noexcept {
    return {value - half_ticks};
  }
  constexpr std::int64_t operator-(HalfTickPrice other) const noexcept {
    return value - other.value;
  }

  auto operator<=>(const HalfTickPrice&) const = default;
};

inline double to_price(HalfTickPrice p, double tick_size) noexcept {
  return static_cast<double>(p.value) * tick_size / 2.0;
}

// Converts an amount expressed in half-tick x volume units into price units.
inline double half_ticks_to_price_units(std::int64_t amount, double tick_size) noexcept {
  return static_cast<double>(amount) * tick_size / 2.0;
}

namespace detail {
inline double snap(double x) noexcept {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : x;
}
}  // namespace detail

// Smallest tradable price >= `ticks` (a real price expressed in ticks).
inline HalfTickPrice ceil_to_tick(double ticks) noexcept {
  return HalfTickPrice::from_ticks(static_cast<std::int64_t>(std::ceil(detail::snap(ticks))));
}

// Largest tradable price <= `ticks`.
inline HalfTickPrice floor_to_tick(double ticks) noexcept {
  return HalfTickPrice::from_ticks(static_cast<std::int64_t>(std::floor(detail::snap(ticks))));
}

inline double to_ticks(HalfTickPrice p) noexcept { return static_cast<double>(p.value) / 2.0; }

}  // namespace mmsim
