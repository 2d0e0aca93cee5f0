#!/usr/bin/env python3
"""Regenerates the bundled sample inputs under data/.

The series are reconstructions, not downloads: the share and mean-income
paths interpolate the published anchor values listed below, and the weekly
price paths are seeded geometric random walks whose per-year volatility
averages to the published per-commodity figure. See data/README.md.

Usage: python3 data/make_sample_data.py [output_dir]
"""

import bisect
import datetime as dt
import math
import random
import sys
from pathlib import Path

SEED = 20200101

# (year, bottom-50% share). Endpoints and the 1981 / 2002 levels are the
# published values; the rest shape the path between them.
S50_ANCHORS = [
    (1951, 0.206), (1955, 0.210), (1960, 0.2155), (1965, 0.221), (1970, 0.226),
    (1975, 0.230), (1981, 0.235), (1983, 0.236), (1987, 0.231), (1991, 0.222),
    (1995, 0.214), (1999, 0.207), (2002, 0.2028), (2005, 0.186), (2008, 0.166),
    (2011, 0.151), (2013, 0.147), (2015, 0.147),
]
S10_ANCHORS = [
    (1951, 0.367), (1960, 0.350), (1970, 0.330), (1981, 0.307), (1990, 0.340),
    (2000, 0.420), (2005, 0.480), (2010, 0.540), (2015, 0.560),
]
S1_ANCHORS = [
    (1951, 0.115), (1960, 0.100), (1970, 0.085), (1981, 0.067), (1990, 0.100),
    (2000, 0.150), (2005, 0.180), (2010, 0.205), (2015, 0.210),
]

# Per-capita growth regimes for the mean-income path (log slope per year),
# rescaled afterwards so the whole-period log-linear slope is MU_TARGET.
GROWTH_REGIMES = [(1947, 0.009), (1980, 0.026), (2000, 0.048)]
MU_TARGET = 0.0231
MEAN_INCOME_1947 = 7500.0

COMMODITIES = {
    # name: (first date, last date, start price, yearly log drift, target sigma)
    "rice": ("1993-01-04", "2012-12-31", 820.0, 0.045, 0.08),
    "jaggery": ("1993-01-04", "2012-12-31", 700.0, 0.065, 0.13),
    "wheat": ("1993-01-04", "2012-12-31", 410.0, 0.055, 0.14),
    "gold": ("1979-01-05", "2019-12-27", 226.0, 0.045, 0.17),
}


def pchip(anchors, x):
    """Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson)."""
    xs = [a[0] for a in anchors]
    ys = [a[1] for a in anchors]
    n = len(xs)
    h = [xs[i + 1] - xs[i] for i in range(n - 1)]
    d = [(ys[i + 1] - ys[i]) / h[i] for i in range(n - 1)]
    m = [0.0] * n
    m[0], m[-1] = d[0], d[-1]
    for i in range(1, n - 1):
        if d[i - 1] * d[i] <= 0:
            m[i] = 0.0
        else:
            w1 = 2 * h[i] + h[i - 1]
            w2 = h[i] + 2 * h[i - 1]
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i])
    i = min(max(bisect.bisect_right(xs, x) - 1, 0), n - 2)
    t = (x - xs[i]) / h[i]
    h00 = (1 + 2 * t) * (1 - t) ** 2
    h10 = t * (1 - t) ** 2
    h01 = t * t * (3 - 2 * t)
    h11 = t * t * (t - 1)
    return h00 * ys[i] + h10 * h[i] * m[i] + h01 * ys[i + 1] + h11 * h[i] * m[i + 1]


def shares(rng):
    rows = ["year,s50,s10_top,s1_top"]
    anchor_years = {a[0] for a in S50_ANCHORS}
    for year in range(1951, 2016):
        s50 = pchip(S50_ANCHORS, year)
        if year not in anchor_years:
            s50 += rng.gauss(0.0, 0.0012)
        s10 = pchip(S10_ANCHORS, year) + rng.gauss(0.0, 0.002)
        s1 = pchip(S1_ANCHORS, year) + rng.gauss(0.0, 0.001)
        rows.append(f"{year},{s50:.4f},{s10:.4f},{s1:.4f}")
    return rows


def mean_income(rng):
    years = list(range(1947, 2018))
    log_path = [0.0]
    for y in years[1:]:
        rate = [r for start, r in GROWTH_REGIMES if start <= y - 1][-1]
        log_path.append(log_path[-1] + rate + rng.gauss(0.0, 0.012))
    t = [y - years[0] for y in years]
    tm = sum(t) / len(t)
    lm = sum(log_path) / len(log_path)
    slope = sum((a - tm) * (b - lm) for a, b in zip(t, log_path)) / sum((a - tm) ** 2 for a in t)
    scale = MU_TARGET / slope
    rows = ["year,mean_income"]
    for y, lp in zip(years, log_path):
        rows.append(f"{y},{MEAN_INCOME_1947 * math.exp(lp * scale):.1f}")
    return rows


def prices(rng, first, last, start_price, drift, sigma_target):
    d0 = dt.date.fromisoformat(first)
    d1 = dt.date.fromisoformat(last)
    dates = []
    d = d0
    while d <= d1:
        dates.append(d)
        d += dt.timedelta(days=7)
    # Per-year generating volatility varies around the target; normalise so
    # the yearly values average to it exactly.
    years = sorted({x.year for x in dates})
    raw = {y: rng.uniform(0.7, 1.3) for y in years}
    norm = sum(raw.values()) / len(raw)
    sig = {y: sigma_target * raw[y] / norm for y in years}
    rows = ["date,price"]
    price = start_price
    weekly_drift = drift / 52.0
    for i, date in enumerate(dates):
        if i > 0:
            s = sig[date.year] / math.sqrt(52.0)
            price *= math.exp(weekly_drift - 0.5 * s * s + s * rng.gauss(0.0, 1.0))
        # A handful of missing weeks, as in the market-bulletin extracts.
        if 0 < i < len(dates) - 1 and rng.random() < 0.004:
            continue
        rows.append(f"{date.isoformat()},{price:.2f}")
    return rows


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    (out / "india_shares.csv").write_text("\n".join(shares(rng)) + "\n")
    (out / "india_mean_income.csv").write_text("\n".join(mean_income(rng)) + "\n")
    for name, spec in COMMODITIES.items():
        (out / f"{name}.csv").write_text("\n".join(prices(rng, *spec)) + "\n")


if __name__ == "__main__":
    main()
