"""Small helpers for summarising sensor readings."""

import csv
import math
from collections import defaultdict


def read_rows(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            yield {
                "station": row["station"],
                "day": int(row["day"]),
                "temp": float(row["temp_c"]),
                "rain": float(row["rain_mm"]),
            }


def mean(values):
    values = list(values)
    if not values:
        raise ValueError("mean of empty sequence")
    return sum(values) / len(values)


def stdev(values):
    values = list(values)
    if len(values) < 2:
        return 0.0
    m = mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / (len(values) - 1))


def percentile(values, q):
    values = sorted(values)
    if not values:
        raise ValueError("percentile of empty sequence")
    pos = (len(values) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return values[lo]
    return values[lo] + (values[hi] - values[lo]) * (pos - lo)


def by_station(rows):
    groups = defaultdict(list)
    for row in rows:
        groups[row["station"]].append(row)
    return groups


def summarise(rows):
    out = {}
    for station, items in sorted(by_station(rows).items()):
        temps = [r["temp"] for r in items]
        rain = [r["rain"] for r in items]
        out[station] = {
            "days": len(items),
            "temp_mean": round(mean(temps), 2),
            "temp_sd": round(stdev(temps), 2),
            "temp_p90": round(percentile(temps, 0.9), 2),
            "rain_total": round(sum(rain), 1),
            "wet_days": sum(1 for r in rain if r > 0.2),
        }
    return out


def longest_dry_spell(rows):
    best = 0
    run = 0
    for row in sorted(rows, key=lambda r: r["day"]):
        if row["rain"] <= 0.2:
            run += 1
            best = max(best, run)
        else:
            run = 0
    return best


def main(argv):
    if len(argv) != 2:
        print("usage: stats.py readings.csv")
        return 2
    rows = list(read_rows(argv[1]))
    for station, summary in summarise(rows).items():
        fields = ", ".join(f"{k}={v}" for k, v in summary.items())
        print(f"{station}: {fields}")
    for station, items in sorted(by_station(rows).items()):
        print(f"{station}: longest dry spell {longest_dry_spell(items)} days")
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main(sys.argv))
