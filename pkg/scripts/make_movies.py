"""Generate the bundled demo movies CSV (run once; output is committed).

The table is shaped for the walkthrough scripts: two films share the title
"High", exactly 20 Super Hero films exist and none of them was released after
2009, and dramas dominate the low-budget/high-gross segment.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "xnli" / "datasets" / "movies.csv"

ADJECTIVES = [
    "Silent", "Golden", "Midnight", "Crimson", "Distant", "Hidden", "Broken",
    "Electric", "Frozen", "Burning", "Lonely", "Scarlet", "Velvet", "Wandering",
    "Forgotten", "Winter", "Amber", "Paper", "Glass", "Iron",
]
NOUNS = [
    "Harbor", "Empire", "Voyage", "Garden", "Horizon", "Kingdom", "Letters",
    "Echoes", "Tides", "Shadows", "Rivers", "Crowns", "Castles", "Orchard",
    "Lanterns", "Summers", "Miles", "Signals", "Bridges", "Meadows",
]
HERO_TITLES = [
    "Captain Nova", "Night Guardian", "Steel Sentinel", "Thunder Mask",
    "Lady Comet", "The Iron Falcon", "Shadow Ranger", "Crimson Bolt",
    "Doctor Meteor", "The Quantum Knight", "Silver Specter", "Atomic Arrow",
    "The Granite Fist", "Nebula Girl", "Major Tempest", "The Emerald Wasp",
    "Volt Runner", "The Marble Titan", "Aurora Blade", "Mister Mirage",
]

GENRES = ["Drama", "Comedy", "Action", "Adventure", "Horror", "Musical", "Thriller"]
RATINGS = ["G", "PG", "PG-13", "R"]
CREATIVE = ["Contemporary Fiction", "Historical Fiction", "Fantasy", "Science Fiction", "Dramatization"]


def main() -> None:
    rng = random.Random(41)
    rows: list[dict] = []

    def add(title, gross, budget, year, rating, genre, imdb, minutes, creative):
        rows.append(
            {
                "Title": title,
                "Worldwide Gross": gross,
                "Production Budget": budget,
                "Release Year": year,
                "Content Rating": rating,
                "Genre": genre,
                "IMDB Rating": imdb,
                "Running Time": minutes,
                "Creative Type": creative,
            }
        )

    # The two films titled "High" (kept after the implicit Title filter).
    add("High", 145_000_000, 32_000_000, 2003, "R", "Drama", 7.8, 124, "Contemporary Fiction")
    add("High", 88_000_000, 21_000_000, 1999, "PG-13", "Comedy", 6.4, 101, "Contemporary Fiction")

    # 20 Super Hero films, all released in 2009 or earlier.
    for i, title in enumerate(HERO_TITLES):
        year = 1998 + (i * 7) % 12  # 1998..2009
        gross = 90_000_000 + rng.randrange(40, 620) * 1_000_000
        budget = 60_000_000 + rng.randrange(30, 160) * 1_000_000
        add(
            title,
            gross,
            budget,
            year,
            rng.choice(["PG", "PG-13", "PG-13", "R"]),
            rng.choice(["Action", "Action", "Adventure"]),
            round(rng.uniform(5.2, 8.9), 1),
            rng.randrange(98, 152),
            "Super Hero",
        )

    # Low-budget/high-gross successes: dramas dominate the segment.
    segment = [("Drama", 8), ("Comedy", 5), ("Action", 3), ("Adventure", 2), ("Musical", 1)]
    titles = [f"{a} {n}" for a, n in zip(ADJECTIVES, NOUNS)]
    extra = [f"The {a} {n}" for a in ADJECTIVES[:10] for n in NOUNS[10:]]
    pool = titles + extra
    cursor = 0
    for genre, count in segment:
        for _ in range(count):
            title = pool[cursor]
            cursor += 1
            add(
                title,
                105_000_000 + rng.randrange(5, 420) * 1_000_000,
                12_000_000 + rng.randrange(0, 80) * 1_000_000,
                rng.randrange(1988, 2013),
                rng.choice(RATINGS),
                genre,
                round(rng.uniform(6.0, 9.3), 1),
                rng.randrange(88, 165),
                rng.choice(CREATIVE),
            )

    # The remaining catalogue.
    while len(rows) < 96:
        title = pool[cursor]
        cursor += 1
        big = rng.random() < 0.30
        gross = (
            rng.randrange(2, 95) * 1_000_000
            if not big
            else 100_000_000 + rng.randrange(1, 700) * 1_000_000
        )
        budget = rng.randrange(1, 230) * 1_000_000
        add(
            title,
            gross,
            budget,
            rng.randrange(1980, 2013),
            rng.choice(RATINGS),
            rng.choice(GENRES),
            round(rng.uniform(2.1, 9.1), 1),
            rng.randrange(80, 190),
            rng.choice(CREATIVE),
        )

    # A few nulls to exercise the null paths (never on the staged rows above).
    rows[30]["Worldwide Gross"] = ""
    rows[45]["Content Rating"] = ""
    rows[60]["IMDB Rating"] = ""

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
