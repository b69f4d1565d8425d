#!/usr/bin/env python3
"""Regenerate the synthetic data fixtures under charts/.

Deterministic by construction; run from the repository root. The daily
series starts on a Monday at a month boundary so 90 days cover exactly
3 calendar months and 13 ISO weeks.
"""

from __future__ import annotations

import datetime as dt
import math
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CHARTS = ROOT / "charts"

DAILY_START = dt.date(2024, 4, 1)
DAILY_DAYS = 90


def daily_visitors() -> str:
    lines = ["day,visitors"]
    for i in range(DAILY_DAYS):
        day = DAILY_START + dt.timedelta(days=i)
        value = round(100 + 30 * math.sin(2 * math.pi * i / 7) + 0.5 * i, 1)
        lines.append(f"{day.isoformat()},{value}")
    return "\n".join(lines) + "\n"


def main() -> None:
    CHARTS.mkdir(exist_ok=True)
    (CHARTS / "daily-visitors.csv").write_text(daily_visitors(), encoding="utf-8")
    print(f"wrote {CHARTS / 'daily-visitors.csv'} ({DAILY_DAYS} rows)")


if __name__ == "__main__":
    main()
