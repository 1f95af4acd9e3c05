from __future__ import annotations

import pytest

from xnli.chartspec import ChartSpec, Encoding, FilterT, specs_equal
from xnli.errors import NoValidExample
from xnli.interpreter import interpret
from xnli.query_examples import candidate_texts, generate_examples, render_value, roundtrip
from xnli.synthesize import synthesize


def scatter_spec(movies):
    return ChartSpec(
        data=movies.id,
        mark="point",
        encodings={
            "x": Encoding("Worldwide Gross", "quantitative"),
            "y": Encoding("IMDB Rating", "quantitative"),
        },
    )


def test_scatter_candidates_include_correlation_template(movies):
    texts = candidate_texts(scatter_spec(movies), movies)
    assert "How are Worldwide Gross and IMDB Rating correlated?" in texts
    assert len(texts) >= 2


def test_count_by_genre_with_two_filters(movies):
    spec = synthesize(
        interpret(
            "How many movies in each Genre whose Worldwide Gross is over 100M "
            "and Production Budget is under 100M",
            movies,
        ),
        movies,
    )
    texts = candidate_texts(spec, movies)
    assert (
        "How many movies in each Genre whose Worldwide Gross is over 100M "
        "and Production Budget is under 100M?" in texts
    )
    valid, _ = generate_examples(spec, movies, 0)
    assert texts[0] in {e.text for e in valid}


def test_equality_filter_rendered_as_for_phrase(movies):
    spec = synthesize(interpret("show gross and budget of super hero movies", movies), movies)
    texts = candidate_texts(spec, movies)
    assert any("for Super Hero movies" in t for t in texts)
    valid, _ = generate_examples(spec, movies, 1)
    assert valid


def test_every_validated_example_reproduces_target(movies):
    specs = [
        scatter_spec(movies),
        synthesize(interpret("average budget by genre", movies), movies),
        synthesize(interpret("distribution of IMDB rating", movies), movies),
        synthesize(interpret("how many movies in each Content Rating", movies), movies),
        synthesize(interpret("show gross over time", movies), movies),
    ]
    for target in specs:
        valid, recommended = generate_examples(target, movies, 5)
        assert recommended in valid
        for example in valid:
            assert example.validated
            produced = roundtrip(example.text, movies)
            assert produced is not None
            assert specs_equal(produced, target, axis_symmetry=target.mark == "point")


def test_seeded_recommendation_is_deterministic(movies):
    target = scatter_spec(movies)
    first = generate_examples(target, movies, 42)
    second = generate_examples(target, movies, 42)
    assert [e.text for e in first[0]] == [e.text for e in second[0]]
    assert first[1].text == second[1].text
    other = generate_examples(target, movies, 43)
    assert [e.text for e in other[0]] == [e.text for e in first[0]]


def test_no_valid_example_for_uncovered_family(movies):
    spec = ChartSpec(
        data=movies.id,
        mark="arc",
        encodings={"x": Encoding("Genre", "nominal"), "y": Encoding("IMDB Rating", "quantitative")},
    )
    with pytest.raises(NoValidExample):
        generate_examples(spec, movies, 0)


def test_inexpressible_filter_blocks_candidates(movies):
    spec = scatter_spec(movies)
    spec.transforms.append(FilterT("Title", "contains", ["high"]))
    assert candidate_texts(spec, movies) == []


def test_render_value_magnitude_suffixes():
    assert render_value(100_000_000, "quantitative") == "100M"
    assert render_value(2_500_000_000, "quantitative") == "2.5B"
    assert render_value(1_234_567, "quantitative") == "1.234567M"
    assert render_value(2009, "temporal") == "2009"
    assert render_value(950_000, "quantitative") == "950000"


def test_rendered_values_parse_back_exactly(movies):
    from xnli.interpreter import parse_numeric_literal

    for value in [100_000_000, 1_234_567, 2_500_000_000, 7_000_000, 999_999_999]:
        rendered = render_value(value, "quantitative")
        assert parse_numeric_literal(rendered) == value
