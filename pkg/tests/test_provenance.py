from __future__ import annotations

import random

from conftest import csv_bytes
from oracles import execute_reference
from xnli.chartspec import BinT, ChartSpec, Encoding, FilterT
from xnli.data import load_csv
from xnli.interpreter import interpret
from xnli.provenance import (
    ROW_KEY,
    build_trace,
    execute,
    extract_group_aggregate,
    select_key_attribute,
)
from xnli.synthesize import synthesize


def test_filter_counts_match_brute_force(tiny):
    spec = ChartSpec(
        data=tiny.id,
        transforms=[FilterT("x", ">", [3])],
        mark="point",
        encodings={"x": Encoding("x", "quantitative"), "y": Encoding("x", "quantitative")},
    )
    trace = build_trace(spec, tiny)
    flt = next(s for s in trace.steps if s.op == "Filter")
    assert flt.input_count == 5 and flt.output_count == 2


def test_identity_pipeline_is_load_then_encode(tiny):
    spec = ChartSpec(
        data=tiny.id,
        mark="point",
        encodings={"x": Encoding("x", "quantitative"), "y": Encoding("x", "quantitative")},
    )
    trace = build_trace(spec, tiny)
    assert [s.op for s in trace.steps] == ["Load", "Encode"]
    assert all(s.input_count == s.output_count == 5 for s in trace.steps)


def test_scenario_scale_filter_counts(movies):
    spec = synthesize(interpret("show gross less than 100M", movies), movies)
    trace = build_trace(spec, movies)
    flt = next(s for s in trace.steps if s.op == "Filter")
    expected = sum(
        1
        for row in movies.rows
        if row["Worldwide Gross"] is not None and row["Worldwide Gross"] < 1e8
    )
    assert flt.input_count == movies.row_count
    assert flt.output_count == expected


def test_extract_group_aggregate_cases():
    bar = ChartSpec(
        data="d",
        mark="bar",
        encodings={
            "x": Encoding("Genre", "nominal"),
            "y": Encoding("Budget", "quantitative", aggregate="mean"),
        },
    )
    assert extract_group_aggregate(bar) == (["Genre"], [("Budget", "mean")])

    histogram = ChartSpec(
        data="d",
        transforms=[BinT("Rating")],
        mark="bar",
        encodings={
            "x": Encoding("Rating", "quantitative", bin=True),
            "y": Encoding(None, "quantitative", aggregate="count"),
        },
    )
    assert extract_group_aggregate(histogram) == (["Rating"], [(None, "count")])

    scatter = ChartSpec(
        data="d",
        mark="point",
        encodings={
            "x": Encoding("Gross", "quantitative"),
            "y": Encoding("Rating", "quantitative"),
        },
    )
    dims, measures = extract_group_aggregate(scatter)
    assert dims == ["Gross", "Rating"] and measures == []


def test_select_key_attribute_prefers_lowest_repetition(movies):
    assert select_key_attribute(movies) == "Title"


def test_select_key_attribute_single_candidate():
    ds = load_csv(csv_bytes("n,x", "a,1", "b,2"), "t")
    assert select_key_attribute(ds) == "n"


def test_select_key_attribute_rate_tie_break():
    ds = load_csv(
        csv_bytes(
            "first,second",
            *[f"u{i},{'abc'[i % 3]}" for i in range(10)],
        ),
        "t",
    )
    # first: 10 distinct over 10 rows (rate 0.0); second: 3 distinct (rate 0.7).
    assert select_key_attribute(ds) == "first"


def test_key_attribute_falls_back_to_row_index():
    ds = load_csv(csv_bytes("x,y", "1,2", "3,4"), "t")
    assert select_key_attribute(ds) == ROW_KEY
    spec = ChartSpec(
        data=ds.id,
        mark="point",
        encodings={"x": Encoding("x", "quantitative"), "y": Encoding("y", "quantitative")},
    )
    trace = build_trace(spec, ds)
    assert trace.key_attribute == ROW_KEY
    assert all(s.sample_view.columns[0] == ROW_KEY for s in trace.steps)


def test_count_chaining_invariant(movies):
    queries = [
        "show budget less than 100M and Gross more than 100M, group by genre",
        "how many movies in each Genre whose gross is over 100M",
        "show the IMDB rating",
        "show gross over time",
    ]
    for q in queries:
        spec = synthesize(interpret(q, movies), movies)
        trace = build_trace(spec, movies)
        assert trace.steps[0].input_count == movies.row_count
        for before, after in zip(trace.steps, trace.steps[1:]):
            assert after.input_count == before.output_count


def test_sample_view_columns_within_relevant(movies):
    spec = synthesize(
        interpret("how many movies in each Genre whose gross is over 100M", movies),
        movies,
    )
    trace = build_trace(spec, movies)
    allowed = set(trace.relevant_columns) | {trace.key_attribute}
    for step in trace.steps:
        assert set(step.sample_view.columns) <= allowed
    assert set(trace.sample_row_ids) <= set(range(movies.row_count))


def test_cues_filter_and_group(movies):
    spec = synthesize(
        interpret("average budget by genre whose gross is under 100M", movies), movies
    )
    trace = build_trace(spec, movies)
    flt = next(s for s in trace.steps if s.op == "Filter")
    kinds = [c.kind for c in flt.cues]
    assert kinds[0] == "HighlightColumn"
    removed = [c.target for c in flt.cues if c.kind == "StrikeRow"]
    assert removed == flt.removed_ids
    struck = {r.id for r in flt.sample_view.rows if r.status == "removed"}
    assert struck == set(removed)

    group = next(s for s in trace.steps if s.op == "GroupAggregate")
    assert all(c.kind == "MergeCells" for c in group.cues)
    assert all(r.status == "merged-into-group" for r in group.sample_view.rows)

    encode = trace.steps[-1]
    assert all(c.kind == "LinkToMark" for c in encode.cues)


def test_no_transform_trace_has_only_link_cues(tiny):
    spec = ChartSpec(
        data=tiny.id,
        mark="point",
        encodings={"x": Encoding("x", "quantitative"), "y": Encoding("x", "quantitative")},
    )
    trace = build_trace(spec, tiny)
    kinds = {c.kind for s in trace.steps for c in s.cues}
    assert kinds == {"LinkToMark"}


def test_mean_aggregation_matches_reference(movies):
    spec = synthesize(interpret("average budget by genre", movies), movies)
    result = execute(spec, movies)
    reference = execute_reference(
        [dict(r) for r in movies.rows],
        filters=[],
        bin_fields=[],
        dims=["Genre"],
        measures=[("Production Budget", "mean")],
    )
    assert result.groups is not None
    assert len(result.groups) == len(reference["groups"])
    for group in result.groups:
        expected = reference["groups"][group.key]["Production Budget"]
        actual = group.values["Production Budget"]
        assert abs(actual - expected) <= 1e-9 * max(1.0, abs(expected))


def test_randomized_executor_equivalence_small():
    rng = random.Random(99)
    for _ in range(60):
        rows = rng.randrange(5, 60)
        lines = ["label,q1,q2"]
        for i in range(rows):
            lines.append(f"r{i},{rng.randrange(0, 50)},{rng.randrange(0, 900)}")
        ds = load_csv(csv_bytes(*lines), "fuzz")
        threshold = rng.randrange(5, 45)
        spec = ChartSpec(
            data=ds.id,
            transforms=[FilterT("q1", rng.choice(["<", ">", "<=", ">="]), [threshold])],
            mark="bar",
            encodings={
                "x": Encoding("label", "nominal"),
                "y": Encoding("q2", "quantitative", aggregate=rng.choice(["mean", "sum"])),
            },
        )
        agg = spec.encodings["y"].aggregate
        result = execute(spec, ds)
        reference = execute_reference(
            [dict(r) for r in ds.rows],
            filters=[(t.field, t.operator, t.operands) for t in spec.filters],
            bin_fields=[],
            dims=["label"],
            measures=[("q2", agg)],
        )
        assert len(result.stage_alive[0]) == reference["stage_counts"][0]
        assert {g.key for g in result.groups} == set(reference["groups"])
        for group in result.groups:
            expected = reference["groups"][group.key]["q2"]
            assert abs(group.values["q2"] - expected) <= 1e-9 * max(1.0, abs(expected))
