"""Freezes (timestamp, state) -> (hour, dow, month) through the tz database.

Each state is looked up in its primary IANA zone (the same assignment the
library ships). Random instants plus the hours around each DST transition.
Usage: python3 localize_vectors.py > ../data/localize_vectors.txt
"""
import random
from datetime import datetime, timedelta, timezone
from zoneinfo import ZoneInfo

PRIMARY = {
    "Eastern": "America/New_York", "Central": "America/Chicago",
    "Mountain": "America/Denver", "Arizona": "America/Phoenix",
    "Pacific": "America/Los_Angeles", "Alaska": "America/Anchorage",
    "Hawaii": "Pacific/Honolulu",
}
STATES = {
    "AK": "Alaska", "AL": "Central", "AR": "Central", "AZ": "Arizona", "CA": "Pacific",
    "CO": "Mountain", "CT": "Eastern", "DE": "Eastern", "FL": "Eastern", "GA": "Eastern",
    "HI": "Hawaii", "IA": "Central", "ID": "Mountain", "IL": "Central", "IN": "Eastern",
    "KS": "Central", "KY": "Eastern", "LA": "Central", "MA": "Eastern", "MD": "Eastern",
    "ME": "Eastern", "MI": "Eastern", "MN": "Central", "MO": "Central", "MS": "Central",
    "MT": "Mountain", "NC": "Eastern", "ND": "Central", "NE": "Central", "NH": "Eastern",
    "NJ": "Eastern", "NM": "Mountain", "NV": "Pacific", "NY": "Eastern", "OH": "Eastern",
    "OK": "Central", "OR": "Pacific", "PA": "Eastern", "RI": "Eastern", "SC": "Eastern",
    "SD": "Central", "TN": "Central", "TX": "Central", "UT": "Mountain", "VA": "Eastern",
    "VT": "Eastern", "WA": "Pacific", "WI": "Central", "WV": "Eastern", "WY": "Mountain",
}


def local(ts, state):
    t = datetime.fromtimestamp(ts, tz=timezone.utc).astimezone(ZoneInfo(PRIMARY[STATES[state]]))
    return t.hour, t.weekday(), t.month


rng = random.Random(20130704)
lo = int(datetime(1990, 1, 1, tzinfo=timezone.utc).timestamp())
hi = int(datetime(2030, 1, 1, tzinfo=timezone.utc).timestamp())
cases = [(rng.randrange(lo, hi), rng.choice(sorted(STATES))) for _ in range(3000)]

# Every 15 minutes across each transition window, for a few years on both rule sets.
for year in (1995, 2006, 2007, 2013, 2024):
    for month, days in ((3, range(7, 15)), (4, range(1, 8)), (10, range(24, 32)), (11, range(1, 8))):
        for day in days:
            for state in ("NY", "CA", "AZ", "AK", "HI"):
                base = int(datetime(year, month, day, 5, tzinfo=timezone.utc).timestamp())
                for q in range(0, 12 * 2):
                    cases.append((base + q * 1800, state))

for ts, st in cases:
    h, d, m = local(ts, st)
    print(ts, st, h, d, m)
