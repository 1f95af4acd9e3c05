"""Template-based query example generation with round-trip validation.

Candidate sentences are instantiated from a template bank keyed on the spec's
shape, extended with phrases and clauses for each filter, then checked by
re-running the interpreter and comparing the synthesized spec against the
target (x/y order is free for scatter plots). Only candidates that survive the
round trip are offered, and one of them is recommended by a seeded draw.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from decimal import Decimal

from . import interpreter as qi
from . import lexicon
from .chartspec import ChartSpec, specs_equal
from .data import Dataset, NOMINAL, ORDINAL, QUANTITATIVE, TEMPORAL
from .errors import NoValidExample, XnliError
from .synthesize import synthesize

_AGG_WORDS = {"mean": "average", "sum": "total", "max": "highest", "min": "lowest"}


@dataclass
class QueryExample:
    text: str
    target_spec: ChartSpec
    validated: bool

    def to_json(self) -> dict:
        return {"text": self.text, "validated": self.validated}


def render_value(value, kind: str) -> str:
    """Render a filter operand the way a user would type it."""
    if isinstance(value, int) and kind == QUANTITATIVE and abs(value) >= 10**6:
        unit, suffix = (10**9, "B") if abs(value) >= 10**9 else (10**6, "M")
        scaled = Decimal(value) / Decimal(unit)
        text = format(scaled.normalize(), "f")
        return f"{text}{suffix}"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _noun(dataset: Dataset) -> str:
    return dataset.name.lower()


def _filter_suffix(spec: ChartSpec, dataset: Dataset) -> str | None:
    """Phrases and clauses expressing the spec's filters, or None if impossible."""
    parts: list[str] = []
    clause_open = False
    for transform in spec.filters:
        kind = dataset.kind_of(transform.field)
        if transform.operator == "=" and kind in (NOMINAL, ORDINAL):
            parts.append(f" for {transform.operands[0]} {_noun(dataset)}")
            clause_open = False
            continue
        if transform.operator == "between":
            low = render_value(transform.operands[0], kind)
            high = render_value(transform.operands[1], kind)
            phrase = f"between {low} and {high}"
        elif transform.operator in (">", "<", ">=", "<="):
            value = render_value(transform.operands[0], kind)
            if kind == TEMPORAL and transform.operator in (">", "<"):
                word = "after" if transform.operator == ">" else "before"
            elif transform.operator == ">":
                word = "over"
            elif transform.operator == "<":
                word = "under"
            elif transform.operator == ">=":
                word = "at least"
            else:
                word = "at most"
            phrase = f"{word} {value}"
        else:
            return None
        if clause_open:
            parts.append(f" and {transform.field} is {phrase}")
        else:
            parts.append(f" whose {transform.field} is {phrase}")
            clause_open = True
    return "".join(parts)


def _base_templates(spec: ChartSpec, dataset: Dataset) -> tuple[list[str], str] | None:
    """Template sentences for the spec's encodings plus the mark they imply.

    Families are keyed on the encodings alone; when the spec carries a
    different mark (a widget choice), candidate_texts appends the chart-type
    request phrase instead.
    """
    x = spec.encodings.get("x")
    y = spec.encodings.get("y")
    color = spec.encodings.get("color")
    noun = _noun(dataset)

    def is_count(e) -> bool:
        return e is not None and e.aggregate == "count" and e.field is None

    def is_raw(e, kinds) -> bool:
        return (
            e is not None
            and e.field is not None
            and e.aggregate == "none"
            and not e.bin
            and e.kind in kinds
        )

    extra = ""
    if color is not None:
        if color.aggregate == "none" and color.field is not None and not color.bin:
            extra = f" by {color.field}"
        else:
            return None
    if spec.encodings.get("size") is not None:
        return None

    if is_raw(x, (QUANTITATIVE,)) and is_raw(y, (QUANTITATIVE,)):
        a, b = x.field, y.field
        bases = [
            f"What is the relationship between {a} and {b}{extra}?",
            f"How are {a} and {b} correlated{extra}?",
        ]
        if spec.mark == "point":
            bases.insert(0, f"Show {a} and {b} in scatter plot{extra}.")
        return bases, "point"

    if x is not None and x.bin and is_count(y):
        return [
            f"What is the distribution of {x.field}{extra}?",
            f"Show the distribution of {x.field}{extra}.",
            f"How many {noun} per {x.field}{extra}?",
        ], "bar"

    if is_raw(x, (NOMINAL, ORDINAL)) and is_count(y):
        return [
            f"How many {noun} in each {x.field}{extra}?",
            f"Show the number of {noun} by {x.field}{extra}.",
        ], "bar"

    if (
        is_raw(x, (NOMINAL, ORDINAL))
        and y is not None
        and y.field is not None
        and y.aggregate in _AGG_WORDS
    ):
        word = _AGG_WORDS[y.aggregate]
        return [
            f"Show {word} {y.field} by {x.field}{extra}.",
            f"What is the {word} {y.field} in each {x.field}{extra}?",
        ], "bar"

    if is_raw(x, (TEMPORAL,)) and is_count(y):
        return [
            f"How many {noun} by {x.field}{extra}?",
            f"Show the number of {noun} by {x.field}{extra}.",
        ], "line"

    if (
        is_raw(x, (TEMPORAL,))
        and y is not None
        and y.field is not None
        and y.aggregate in _AGG_WORDS
    ):
        word = _AGG_WORDS[y.aggregate]
        templates = [
            f"Show {word} {y.field} by {x.field}{extra}.",
            f"What is the {word} {y.field} in each {x.field}{extra}?",
        ]
        if y.aggregate == "mean" and not extra and spec.mark == "line":
            templates.append(f"Show {y.field} over time.")
            templates.append(f"Show the trend of {y.field}.")
        return templates, "line"

    if (
        x is None
        and y is not None
        and y.field is not None
        and y.aggregate in _AGG_WORDS
        and color is None
    ):
        word = _AGG_WORDS[y.aggregate]
        return [
            f"What is the {word} {y.field}?",
            f"Show the {word} {y.field}.",
        ], "bar"

    return None


def candidate_texts(spec: ChartSpec, dataset: Dataset) -> list[str]:
    """All template instantiations for a spec, before validation."""
    found = _base_templates(spec, dataset)
    if found is None:
        return []
    bases, natural_mark = found
    mark_suffix = ""
    if spec.mark != natural_mark:
        phrase = lexicon.MARK_REQUEST_PHRASES.get(spec.mark)
        if phrase is None:
            return []
        mark_suffix = f" in a {phrase}"
    suffix = _filter_suffix(spec, dataset)
    if suffix is None:
        return []
    candidates = []
    for base in bases:
        punctuation = base[-1]
        candidates.append(base[:-1] + mark_suffix + suffix + punctuation)
    return candidates


def roundtrip(text: str, dataset: Dataset) -> ChartSpec | None:
    """Interpret and synthesize a candidate query; None when the pipeline rejects it."""
    try:
        interp = qi.interpret(text, dataset, qi.PreferenceStore())
        return synthesize(interp, dataset)
    except XnliError:
        return None


def generate_examples(
    target: ChartSpec, dataset: Dataset, seed: int
) -> tuple[list[QueryExample], QueryExample]:
    """Validated query examples for a target spec plus one seeded recommendation."""
    valid: list[QueryExample] = []
    for text in candidate_texts(target, dataset):
        produced = roundtrip(text, dataset)
        ok = produced is not None and specs_equal(
            produced, target, axis_symmetry=target.mark == "point"
        )
        if ok:
            valid.append(QueryExample(text=text, target_spec=target, validated=True))
    if not valid:
        raise NoValidExample("no generated example survives the round-trip check")
    rng = random.Random(seed)
    recommended = valid[rng.randrange(len(valid))]
    return valid, recommended
