from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from xnli.data import load_csv

MOVIES_CSV = (
    Path(__file__).resolve().parents[1] / "src" / "xnli" / "datasets" / "movies.csv"
)


def csv_bytes(*lines: str) -> bytes:
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture(scope="session")
def movies():
    return load_csv(MOVIES_CSV.read_bytes(), "movies")


@pytest.fixture()
def tiny():
    """Five rows, one filterable numeric column, one label column."""
    return load_csv(
        csv_bytes(
            "name,x",
            "a,1",
            "b,2",
            "c,3",
            "d,4",
            "e,5",
        ),
        "points",
    )
