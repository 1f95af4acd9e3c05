"""Shared walkthrough scripts used by the golden files and the acceptance suite.

Scenario 1 drives the CLI: a vague query whose modifier lands as a title
value, the clarified compound query, a chart-type adjustment, and the
count-by-genre follow-up. Scenario 2 drives the HTTP service: an ambiguous
query with an unknown synonym, its revision, an explicit ambiguity
resolution, and an over-constrained follow-up that comes back empty.
"""

from __future__ import annotations

import io
import json
from contextlib import redirect_stdout

from conftest import MOVIES_CSV
from xnli.cli import run as cli_run

SCENARIO1_QUERIES = [
    "show low budget and high gross movies, group by genre",
    "show budget less than 100M and Gross more than 100M, group by genre",
    "How many movies in each Genre whose Worldwide Gross is over 100M "
    "and Production Budget is under 100M",
]

SCENARIO1_ARGV = [
    ["explain", "--data", str(MOVIES_CSV), "--query", SCENARIO1_QUERIES[0]],
    [
        "hint",
        "--data",
        str(MOVIES_CSV),
        "--query",
        SCENARIO1_QUERIES[0],
        "--adjust",
        json.dumps({"kind": "RemoveAttribute", "field": "Title"}),
        "--seed",
        "11",
    ],
    ["explain", "--data", str(MOVIES_CSV), "--query", SCENARIO1_QUERIES[1]],
    [
        "hint",
        "--data",
        str(MOVIES_CSV),
        "--query",
        SCENARIO1_QUERIES[1],
        "--adjust",
        json.dumps({"kind": "ChangeMark", "mark": "point"}),
        "--seed",
        "11",
    ],
    ["explain", "--data", str(MOVIES_CSV), "--query", SCENARIO1_QUERIES[2]],
]


def run_scenario1() -> list[dict]:
    steps = []
    for argv in SCENARIO1_ARGV:
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = cli_run(list(argv))
        assert code == 0, f"CLI failed for {argv}"
        steps.append({"argv": list(argv), "stdout": json.loads(buffer.getvalue())})
    return steps


SCENARIO2_REQUESTS = [
    {"kind": "query", "body": {"query": "show the rating and box office"}},
    {"kind": "query", "body": {"query": "show the rating and worldwide gross"}},
    {
        "kind": "adjust",
        "body": {
            "adjustment": {
                "kind": "ResolveAmbiguity",
                "token": "rating",
                "field": "IMDB Rating",
            },
            "seed": 101,
        },
    },
    {
        "kind": "query",
        "body": {
            "query": "show the rating and worldwide gross of super hero movies "
            "released after 2009"
        },
    },
]


def run_scenario2(client) -> list[dict]:
    datasets = client.get("/datasets").json()["datasets"]
    movies_id = next(d["id"] for d in datasets if d["name"] == "movies")
    sid = client.post("/sessions", json={"datasetId": movies_id}).json()["sessionId"]
    responses = []
    for request in SCENARIO2_REQUESTS:
        url = f"/sessions/{sid}/{request['kind']}"
        response = client.post(url, json=request["body"])
        assert response.status_code == 200, response.text
        responses.append(response.json())
    return responses
