from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from conftest import MOVIES_CSV
from xnli.cli import run
from xnli.service import canonical_json, create_app


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_empty_query_exits_1(capsys):
    code, out, err = invoke(capsys, "interpret", "--query", "")
    assert code == 1
    assert out == ""
    assert json.loads(err)["error"]["code"] == "EmptyQuery"


def test_stdout_is_pure_json(capsys):
    code, out, err = invoke(
        capsys,
        "explain",
        "--data",
        str(MOVIES_CSV),
        "--query",
        "show budget less than 100M and Gross more than 100M, group by genre",
    )
    assert code == 0
    assert err == ""
    payload = json.loads(out)
    assert set(payload) == {"hints", "interp", "spec", "trace"}
    filters = [s for s in payload["trace"]["steps"] if s["op"] == "Filter"]
    assert len(filters) == 2


def test_missing_data_file_exits_1(capsys):
    code, _, err = invoke(capsys, "interpret", "--data", "/no/such.csv", "--query", "x")
    assert code == 1
    assert "error" in err


def test_examples_seeded_determinism(capsys, tmp_path):
    code, out, _ = invoke(
        capsys,
        "explain",
        "--data",
        str(MOVIES_CSV),
        "--query",
        "show gross and IMDB rating",
    )
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(json.loads(out)["spec"]))

    runs = []
    for _ in range(2):
        code, out, _ = invoke(
            capsys,
            "examples",
            "--data",
            str(MOVIES_CSV),
            "--spec",
            str(spec_path),
            "--seed",
            "7",
        )
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["recommended"]["text"]


def test_hint_subcommand_reports_interaction_hint(capsys):
    code, out, _ = invoke(
        capsys,
        "hint",
        "--data",
        str(MOVIES_CSV),
        "--query",
        "show low budget and high gross movies, group by genre",
        "--adjust",
        json.dumps({"kind": "RemoveAttribute", "field": "Title"}),
        "--seed",
        "3",
    )
    assert code == 0
    payload = json.loads(out)
    assert [h["kind"] for h in payload["hints"]] == ["UnexpectedAttributeType"]


def test_invalid_adjustment_exits_1(capsys):
    code, _, err = invoke(
        capsys,
        "hint",
        "--data",
        str(MOVIES_CSV),
        "--query",
        "show gross and budget",
        "--adjust",
        json.dumps({"kind": "SwapChannels", "a": "color", "b": "size"}),
    )
    assert code == 1
    assert json.loads(err)["error"]["code"] == "InvalidAdjustment"


def test_cli_matches_service_response(capsys, tmp_path):
    """The CLI and the HTTP service share one core: identical pipeline output."""
    query = "show the rating and box office"
    code, out, _ = invoke(capsys, "explain", "--data", str(MOVIES_CSV), "--query", query)
    assert code == 0
    cli_payload = json.loads(out)

    with TestClient(create_app(tmp_path)) as client:
        datasets = client.get("/datasets").json()["datasets"]
        movies_id = next(d["id"] for d in datasets if d["name"] == "movies")
        sid = client.post("/sessions", json={"datasetId": movies_id}).json()["sessionId"]
        served = client.post(f"/sessions/{sid}/query", json={"query": query}).json()

    assert canonical_json(cli_payload) == canonical_json(served)
