#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ctxsent {

// US time zones used for local-time derivation. Each state is pinned to a
// single primary zone even when it straddles a boundary.
enum class Zone : std::uint8_t {
  Eastern,
  Central,
  Mountain,
  Arizona,  // Mountain standard time all year
  Pacific,
  Alaska,
  Hawaii,   // no daylight saving
};

struct ZoneRule {
  int standard_offset_hours;  // relative to UTC
  bool observes_dst;
  std::string_view iana_name;  // matching tz database zone, for reference
};

constexpr ZoneRule zone_rule(Zone z) {
  switch (z) {
    case Zone::Eastern: return {-5, true, "America/New_York"};
    case Zone::Central: return {-6, true, "America/Chicago"};
    case Zone::Mountain: return {-7, true, "America/Denver"};
    case Zone::Arizona: return {-7, false, "America/Phoenix"};
    case Zone::Pacific: return {-8, true, "America/Los_Angeles"};
    case Zone::Alaska: return {-9, true, "America/Anchorage"};
    case Zone::Hawaii: return {-10, false, "Pacific/Honolulu"};
  }
  return {0, false, "UTC"};
}

struct StateInfo {
  std::string_view code;
  Zone zone;
};

// The 50 states, sorted by postal code. Multi-zone states use the zone
// covering most of their population (see docs/FORMATS.md).
inline constexpr std::array<StateInfo, 50> kStates{{
    {"AK", Zone::Alaska},   {"AL", Zone::Central},  {"AR", Zone::Central},
    {"AZ", Zone::Arizona},  {"CA", Zone::Pacific},  {"CO", Zone::Mountain},
    {"CT", Zone::Eastern},  {"DE", Zone::Eastern},  {"FL", Zone::Eastern},
    {"GA", Zone::Eastern},  {"HI", Zone::Hawaii},   {"IA", Zone::Central},
    {"ID", Zone::Mountain}, {"IL", Zone::Central},  {"IN", Zone::Eastern},
    {"KS", Zone::Central},  {"KY", Zone::Eastern},  {"LA", Zone::Central},
    {"MA", Zone::Eastern},  {"MD", Zone::Eastern},  {"ME", Zone::Eastern},
    {"MI", Zone::Eastern},  {"MN", Zone::Central},  {"MO", Zone::Central},
    {"MS", Zone::Central},  {"MT", Zone::Mountain}, {"NC", Zone::Eastern},
    {"ND", Zone::Central},  {"NE", Zone::Central},  {"NH", Zone::Eastern},
    {"NJ", Zone::Eastern},  {"NM", Zone::Mountain}, {"NV", Zone::Pacific},
    {"NY", Zone::Eastern},  {"OH", Zone::Eastern},  {"OK", Zone::Central},
    {"OR", Zone::Pacific},  {"PA", Zone::Eastern},  {"RI", Zone::Eastern},
    {"SC", Zone::Eastern},  {"SD", Zone::Central},  {"TN", Zone::Central},
    {"TX", Zone::Central},  {"UT", Zone::Mountain}, {"VA", Zone::Eastern},
    {"VT", Zone::Eastern},  {"WA", Zone::Pacific},  {"WI", Zone::Central},
    {"WV", Zone::Eastern},  {"WY", Zone::Mountain},
}};

// Strong type for a recognized state; wraps its index into kStates.
class StateCode {
 public:
  static constexpr std::size_t kCount = kStates.size();

  static constexpr std::optional<StateCode> parse(std::string_view code) {
    for (std::size_t i = 0; i < kStates.size(); ++i) {
      if (kStates[i].code == code) return StateCode(static_cast<std::uint8_t>(i));
    }
    return std::nullopt;
  }

  static constexpr StateCode from_index(std::size_t i) {
    return StateCode(static_cast<std::uint8_t>(i));
  }

  constexpr std::size_t index() const { return index_; }
  constexpr std::string_view code() const { return kStates[index_].code; }
  constexpr Zone zone() const { return kStates[index_].zone; }

  friend constexpr bool operator==(StateCode, StateCode) = default;
  friend constexpr auto operator<=>(StateCode, StateCode) = default;

 private:
  constexpr explicit StateCode(std::uint8_t i) : index_(i) {}
  std::uint8_t index_;
};

}  // namespace ctxsent
