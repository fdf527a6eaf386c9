#!/usr/bin/env python3
"""Fetch the UCI Statlog Vehicle Silhouettes data and write tests/data/vehicle.csv.

The acceptance suite runs its sweep against this file when present and falls
back to a synthetic stand-in otherwise. Needs network access.
"""

import os
import sys
import urllib.request

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/"
PARTS = [f"xa{c}.dat" for c in "abcdefghi"]

COLUMNS = [
    "compactness",
    "circularity",
    "distance_circularity",
    "radius_ratio",
    "pr_axis_aspect_ratio",
    "max_length_aspect_ratio",
    "scatter_ratio",
    "elongatedness",
    "pr_axis_rectangularity",
    "max_length_rectangularity",
    "scaled_variance_major",
    "scaled_variance_minor",
    "scaled_radius_of_gyration",
    "skewness_about_major",
    "skewness_about_minor",
    "kurtosis_about_minor",
    "kurtosis_about_major",
    "hollows_ratio",
    "class",
]


def main() -> int:
    out_path = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "vehicle.csv")
    out_path = os.path.normpath(out_path)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)

    rows = []
    for part in PARTS:
        url = BASE + part
        print(f"fetching {url}")
        with urllib.request.urlopen(url) as response:
            for line in response.read().decode("ascii").splitlines():
                fields = line.split()
                if not fields:
                    continue
                if len(fields) != len(COLUMNS):
                    raise SystemExit(f"{part}: expected {len(COLUMNS)} fields, got {len(fields)}")
                rows.append(fields)

    if len(rows) != 846:
        raise SystemExit(f"expected 846 rows, got {len(rows)}")

    with open(out_path, "w", encoding="ascii") as out:
        out.write(",".join(COLUMNS) + "\n")
        for fields in rows:
            out.write(",".join(fields) + "\n")
    print(f"wrote {out_path} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
