#pragma once

#include <chrono>
#include <cstdint>

#include "ctxsent/states.hpp"

namespace ctxsent {

// Local wall-clock fields used as temporal context.
struct LocalTime {
  int hour;   // 0-23
  int dow;    // 0 = Monday ... 6 = Sunday
  int month;  // 1-12

  friend bool operator==(const LocalTime&, const LocalTime&) = default;
};

namespace detail {

// US daylight-saving window for `y`, as UTC instants, for a zone whose
// standard offset is `std_offset`. Rules: 2007 onwards second Sunday in March
// to first Sunday in November; earlier years first Sunday in April to last
// Sunday in October. Transitions happen at 02:00 local time.
inline bool in_us_dst(std::chrono::sys_seconds t, std::chrono::year y,
                      std::chrono::hours std_offset) {
  using namespace std::chrono;
  sys_days start_day, end_day;
  if (y >= year{2007}) {
    start_day = sys_days{y / March / Sunday[2]};
    end_day = sys_days{y / November / Sunday[1]};
  } else {
    start_day = sys_days{y / April / Sunday[1]};
    end_day = sys_days{y / October / Sunday[last]};
  }
  // 02:00 standard time at the start, 02:00 daylight (= 01:00 standard) at the end.
  const sys_seconds start = start_day + hours{2} - std_offset;
  const sys_seconds end = end_day + hours{1} - std_offset;
  return t >= start && t < end;
}

}  // namespace detail

// Converts a UTC epoch timestamp into local hour, day of week and month in
// the state's primary time zone.
inline LocalTime localize(std::int64_t timestamp_utc, StateCode state) {
  using namespace std::chrono;
  const ZoneRule rule = zone_rule(state.zone());
  const sys_seconds t{seconds{timestamp_utc}};
  const hours std_offset{rule.standard_offset_hours};

  auto local = t + std_offset;
  if (rule.observes_dst) {
    const year y = year_month_day{floor<days>(local)}.year();
    if (detail::in_us_dst(t, y, std_offset)) local += hours{1};
  }
  const sys_days day = floor<days>(local);
  const year_month_day ymd{day};
  const auto since_midnight = duration_cast<hours>(local - day);
  return LocalTime{
      static_cast<int>(since_midnight.count()),
      static_cast<int>(weekday{day}.iso_encoding()) - 1,
      static_cast<int>(static_cast<unsigned>(ymd.month())),
  };
}

}  // namespace ctxsent
