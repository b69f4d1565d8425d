from __future__ import annotations

from pathlib import Path

import pytest

from feelgrid.catalogue import scan_catalogue
from feelgrid.chart import load_chart, parse_spec

ROOT = Path(__file__).resolve().parent.parent
CHARTS = ROOT / "charts"

# the 13-quarter series behind the worked example, kept in one place
FIXTURE_QUARTERS = [
    ("2020-Q2", 0.25),
    ("2020-Q3", 0.1),
    ("2020-Q4", 0.1),
    ("2021-Q1", 0.1),
    ("2021-Q2", 0.1),
    ("2021-Q3", 0.1),
    ("2021-Q4", 0.1),
    ("2022-Q1", 0.35),
    ("2022-Q2", 0.85),
    ("2022-Q3", 1.6),
    ("2022-Q4", 2.35),
    ("2023-Q1", 3.1),
    ("2023-Q2", 3.85),
]


@pytest.fixture(scope="session")
def catalogue():
    return scan_catalogue(CHARTS)


@pytest.fixture(scope="session")
def interest_chart():
    path = CHARTS / "interest-rates.vl.json"
    spec = parse_spec(path.read_bytes(), name="interest-rates", base=path.parent)
    return load_chart(spec)


@pytest.fixture()
def fresh_session(catalogue):
    from feelgrid.session import Session

    return Session(catalogue)
