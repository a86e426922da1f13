#!/usr/bin/env python3
"""Regenerates the bundled CSV fixtures under data/.

grid_22x19x7.csv   value(r, y, k) is a closed-form function of the indices
                   (see grid_value); tests recompute it to check ingestion.
separable.csv      22 regions x 3 years. Regions 1-11 get a rising target and
                   a factor `f1` shifted up by 5 standard deviations in every
                   year; `f2` is pure noise shared by both groups.
demo_22x19.csv     22 regions x 19 years with seven plausible-looking index
                   series, for trying the CLI on a realistically shaped panel.
"""

import argparse
import pathlib

import numpy as np

REGIONS = [str(i) for i in range(1, 23)]
GRID_YEARS = list(range(2003, 2022))
GRID_VARIABLES = ["precip", "ndsi", "ndwi", "ndbi", "evi", "ndvi", "night_lst"]


def grid_value(r: int, y: int, k: int) -> float:
    # Integer arithmetic plus one division: reproducible bit-for-bit in C++.
    return r * 1000 + (y - 2000) * 10 + k + ((r * 7 + y * 3 + k * 11) % 97) / 100.0


def write(path, rows):
    with open(path, "w", newline="\n") as f:
        f.write("region_id,year,variable,value\n")
        for region, year, variable, value in rows:
            f.write(f"{region},{year},{variable},{float(value)!r}\n")


def grid_rows():
    for r, region in enumerate(REGIONS):
        for y in GRID_YEARS:
            for k, variable in enumerate(GRID_VARIABLES):
                yield region, y, variable, grid_value(r, y, k)


def separable_rows(seed):
    rng = np.random.default_rng(seed)
    years = [2019, 2020, 2021]
    rows = []
    for i, region in enumerate(REGIONS):
        rising = i < 11
        slope = rng.uniform(0.4, 0.6) if rising else rng.uniform(-0.05, 0.05)
        base = 20.0 + rng.normal(0.0, 0.5)
        lst = [base + slope * (t - 2020) + rng.normal(0.0, 0.02) for t in years]
        f1 = [(5.0 if rising else 0.0) + rng.normal(0.0, 1.0) for _ in years]
        f2 = [rng.normal(0.0, 1.0) for _ in years]
        for j, year in enumerate(years):
            rows.append((region, year, "night_lst", round(lst[j], 6)))
            rows.append((region, year, "f1", round(f1[j], 6)))
            rows.append((region, year, "f2", round(f2[j], 6)))
    return rows


def demo_rows(seed):
    rng = np.random.default_rng(seed)
    years = np.arange(2003, 2022)
    t = years - years.mean()
    rows = []
    for region in REGIONS:
        trend = rng.uniform(0.005, 0.12)
        lst = 12.0 + rng.normal(0, 1.0) + trend * t + rng.normal(0, 0.25, t.size)
        common = rng.normal(0, 1, t.size)
        series = {
            "precip": 250 - 2.0 * t + 30 * common + rng.normal(0, 20, t.size),
            "ndsi": -0.2 - 0.004 * t + 0.05 * common + rng.normal(0, 0.03, t.size),
            "ndwi": -0.05 + rng.normal(0, 0.02, t.size),
            "ndbi": 0.05 + 0.001 * t + rng.normal(0, 0.01, t.size),
            "evi": 0.15 + 0.002 * trend * t + rng.normal(0, 0.01, t.size),
            "ndvi": 0.22 + rng.normal(0, 0.015, t.size),
            "night_lst": lst,
        }
        for j, year in enumerate(years):
            for variable in GRID_VARIABLES:
                rows.append((region, int(year), variable, round(float(series[variable][j]), 6)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data")
    parser.add_argument("--seed", type=int, default=20230613)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "grid_22x19x7.csv", grid_rows())
    write(out / "separable.csv", separable_rows(args.seed))
    write(out / "demo_22x19.csv", demo_rows(args.seed + 1))


if __name__ == "__main__":
    main()
