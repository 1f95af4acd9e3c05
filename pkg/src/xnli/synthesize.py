"""Deterministic chart synthesis from interpretations, plus widget adjustments.

Attributes referenced only as filter values or filter bounds stay out of the
encodings; everything else is laid out by a fixed defaulting table keyed on
the attribute-kind mix. An explicitly requested chart type always wins, even
when unsuitable (the hint module flags it).
"""

from __future__ import annotations

import copy

from . import interpreter as qi
from .chartspec import (
    AGGREGATES,
    BinT,
    CHANNELS,
    ChartSpec,
    Encoding,
    FilterT,
    MARKS,
    operand_arity,
    validate_spec,
)
from .data import Dataset, NOMINAL, ORDINAL, QUANTITATIVE, TEMPORAL
from .errors import InvalidAdjustment, SpecDatasetMismatch, Unencodable

# Marks that read well for a given mix of encoded attribute kinds; the first
# entry is the default. Ordinal attributes count as nominal here.
SUITABLE_MARKS: dict[tuple[str, ...], tuple[str, ...]] = {
    ("quantitative",): ("bar", "tick"),
    ("nominal",): ("bar",),
    ("temporal",): ("line", "bar"),
    ("quantitative", "quantitative"): ("point",),
    ("nominal", "quantitative"): ("bar",),
    ("quantitative", "temporal"): ("line", "point"),
    ("nominal", "nominal"): ("bar",),
    ("nominal", "temporal"): ("line",),
    ("quantitative", "quantitative", "quantitative"): ("point",),
    ("nominal", "quantitative", "quantitative"): ("point",),
    ("quantitative", "quantitative", "temporal"): ("point",),
    ("nominal", "nominal", "quantitative"): ("bar",),
    ("nominal", "quantitative", "temporal"): ("line",),
}


def _fold_ordinal(kind: str) -> str:
    return NOMINAL if kind == ORDINAL else kind


def suitability_key(kinds: list[str]) -> tuple[str, ...]:
    return tuple(sorted(_fold_ordinal(kind) for kind in kinds))


def suitable_marks(kinds: list[str]) -> tuple[str, ...]:
    return SUITABLE_MARKS.get(suitability_key(kinds), ())


def recommended_mark(kinds: list[str]) -> str | None:
    marks = suitable_marks(kinds)
    return marks[0] if marks else None


def _encodable_attributes(interp: qi.Interpretation) -> list[str]:
    # Attributes used only as filter bounds or matched cell values stay out of
    # the encodings; a grouping/trend/aggregation task reclaims an attribute
    # for display even when it is also filtered.
    filter_fields = {t.attribute for t in interp.tasks if t.kind == qi.FILTER}
    task_bound = {
        t.attribute
        for t in interp.tasks
        if t.kind != qi.FILTER and t.attribute is not None
    }
    hidden = filter_fields - task_bound

    def ordered(predicate) -> list[str]:
        names: list[str] = []
        for ref in interp.attribute_refs:
            if predicate(ref) and ref.attribute not in names:
                names.append(ref.attribute)
        return names

    encodable = ordered(
        lambda r: r.inference != qi.IMPLICIT and r.attribute not in hidden
    )
    if not encodable:
        encodable = ordered(lambda r: r.inference != qi.IMPLICIT)
    if not encodable:
        encodable = ordered(lambda r: True)
    return encodable


def synthesize(
    interp: qi.Interpretation, dataset: Dataset, third_channel: str = "color"
) -> ChartSpec:
    """Turn an interpretation into a chart spec via the defaulting table."""
    for ref in interp.attribute_refs:
        if not dataset.has_attribute(ref.attribute):
            raise SpecDatasetMismatch(f"unknown attribute: {ref.attribute!r}")

    transforms: list = [
        FilterT(t.attribute, t.operator, list(t.operands))
        for t in interp.tasks
        if t.kind == qi.FILTER
    ]

    encodable = _encodable_attributes(interp)
    if not encodable:
        raise Unencodable("no attributes to encode")
    if len(encodable) > 3:
        raise Unencodable(f"cannot encode {len(encodable)} attributes on x/y/color/size")

    agg_by_attr: dict[str, str] = {}
    for task in interp.tasks:
        if task.kind in (qi.AGGREGATE, qi.EXTREMUM) and task.agg_fn != "count":
            if task.attribute in encodable and task.attribute not in agg_by_attr:
                agg_by_attr[task.attribute] = task.agg_fn
    wants_count = any(
        task.kind == qi.AGGREGATE and task.agg_fn == "count" for task in interp.tasks
    )

    dims = [name for name in encodable if name not in agg_by_attr]
    measures: list[tuple[str | None, str]] = [
        (name, agg_by_attr[name]) for name in encodable if name in agg_by_attr
    ]
    if wants_count:
        measures.append((None, "count"))

    kind_of = {name: dataset.kind_of(name) for name in encodable}
    if measures:
        mark, encodings, binned = _plan_with_measures(dims, measures, kind_of)
    else:
        mark, encodings, binned = _plan_defaults(dims, kind_of, third_channel)

    if interp.encoding_intent.explicit and interp.encoding_intent.mark_request != "none":
        mark = interp.encoding_intent.mark_request

    transforms.extend(BinT(name) for name in binned)
    spec = ChartSpec(data=dataset.id, transforms=transforms, mark=mark, encodings=encodings)
    validate_spec(spec, dataset)
    return spec


def _enc(dataset_kind: str, field: str | None, aggregate: str = "none", bin: bool = False) -> Encoding:
    return Encoding(field=field, kind=dataset_kind, aggregate=aggregate, bin=bin)


def _count_encoding() -> Encoding:
    return Encoding(field=None, kind=QUANTITATIVE, aggregate="count")


def _plan_defaults(
    dims: list[str], kind_of: dict[str, str], third_channel: str
) -> tuple[str, dict[str, Encoding], list[str]]:
    qs = [d for d in dims if kind_of[d] == QUANTITATIVE]
    ns = [d for d in dims if kind_of[d] in (NOMINAL, ORDINAL)]
    ts = [d for d in dims if kind_of[d] == TEMPORAL]
    shape = (len(ts), len(ns), len(qs))

    if shape == (0, 0, 1):
        return "bar", {"x": _enc(QUANTITATIVE, qs[0], bin=True), "y": _count_encoding()}, [qs[0]]
    if shape == (0, 1, 0):
        return "bar", {"x": _enc(kind_of[ns[0]], ns[0]), "y": _count_encoding()}, []
    if shape == (1, 0, 0):
        return "line", {"x": _enc(TEMPORAL, ts[0]), "y": _count_encoding()}, []
    if shape == (0, 0, 2):
        return "point", {"x": _enc(QUANTITATIVE, qs[0]), "y": _enc(QUANTITATIVE, qs[1])}, []
    if shape == (0, 1, 1):
        return (
            "bar",
            {"x": _enc(kind_of[ns[0]], ns[0]), "y": _enc(QUANTITATIVE, qs[0], "mean")},
            [],
        )
    if shape == (1, 0, 1):
        return (
            "line",
            {"x": _enc(TEMPORAL, ts[0]), "y": _enc(QUANTITATIVE, qs[0], "mean")},
            [],
        )
    if shape == (0, 2, 0):
        return (
            "bar",
            {
                "x": _enc(kind_of[ns[0]], ns[0]),
                "y": _count_encoding(),
                "color": _enc(kind_of[ns[1]], ns[1]),
            },
            [],
        )
    if shape == (1, 1, 0):
        return (
            "line",
            {
                "x": _enc(TEMPORAL, ts[0]),
                "y": _count_encoding(),
                "color": _enc(kind_of[ns[0]], ns[0]),
            },
            [],
        )
    if shape == (0, 0, 3):
        return (
            "point",
            {
                "x": _enc(QUANTITATIVE, qs[0]),
                "y": _enc(QUANTITATIVE, qs[1]),
                third_channel: _enc(QUANTITATIVE, qs[2]),
            },
            [],
        )
    if shape == (0, 1, 2):
        return (
            "point",
            {
                "x": _enc(QUANTITATIVE, qs[0]),
                "y": _enc(QUANTITATIVE, qs[1]),
                "color": _enc(kind_of[ns[0]], ns[0]),
            },
            [],
        )
    if shape == (1, 0, 2):
        return (
            "point",
            {
                "x": _enc(QUANTITATIVE, qs[0]),
                "y": _enc(QUANTITATIVE, qs[1]),
                "color": _enc(TEMPORAL, ts[0]),
            },
            [],
        )
    if shape == (0, 2, 1):
        return (
            "bar",
            {
                "x": _enc(kind_of[ns[0]], ns[0]),
                "y": _enc(QUANTITATIVE, qs[0], "mean"),
                "color": _enc(kind_of[ns[1]], ns[1]),
            },
            [],
        )
    if shape == (1, 1, 1):
        return (
            "line",
            {
                "x": _enc(TEMPORAL, ts[0]),
                "y": _enc(QUANTITATIVE, qs[0], "mean"),
                "color": _enc(kind_of[ns[0]], ns[0]),
            },
            [],
        )
    raise Unencodable(
        f"no default layout for {len(ts)} temporal / {len(ns)} nominal / "
        f"{len(qs)} quantitative attributes"
    )


def _plan_with_measures(
    dims: list[str],
    measures: list[tuple[str | None, str]],
    kind_of: dict[str, str],
) -> tuple[str, dict[str, Encoding], list[str]]:
    if len(dims) > 2:
        raise Unencodable("too many grouping attributes for an aggregated chart")

    encodings: dict[str, Encoding] = {}
    binned: list[str] = []
    if dims:
        first = dims[0]
        bin_first = kind_of[first] == QUANTITATIVE
        encodings["x"] = _enc(kind_of[first], first, bin=bin_first)
        if bin_first:
            binned.append(first)
    if len(dims) == 2:
        second = dims[1]
        bin_second = kind_of[second] == QUANTITATIVE
        encodings["color"] = _enc(kind_of[second], second, bin=bin_second)
        if bin_second:
            binned.append(second)

    free = [ch for ch in ("y", "color", "size") if ch not in encodings]
    if len(measures) > len(free):
        raise Unencodable("too many aggregates for the available channels")
    for channel, (field, fn) in zip(free, measures):
        if field is None:
            encodings[channel] = _count_encoding()
        else:
            encodings[channel] = _enc(QUANTITATIVE, field, fn)

    mark = "line" if any(kind_of[d] == TEMPORAL for d in dims) else "bar"
    return mark, encodings, binned


def _filter_positions(spec: ChartSpec) -> list[int]:
    return [i for i, t in enumerate(spec.transforms) if isinstance(t, FilterT)]


def apply_adjustment(
    spec: ChartSpec,
    adj,
    dataset: Dataset,
    interp: qi.Interpretation | None = None,
) -> ChartSpec:
    """Apply one widget delta, leaving every other component untouched."""
    result = copy.deepcopy(spec)
    kind = adj.kind

    if kind == "AddFilter":
        _require(adj.field is not None and dataset.has_attribute(adj.field), "unknown attribute")
        _require(adj.operator is not None, "missing operator")
        operands = list(adj.operands or [])
        _require(
            len(operands) == operand_arity(adj.operator),
            f"operator {adj.operator!r} expects {operand_arity(adj.operator)} operand(s)",
        )
        positions = _filter_positions(result)
        insert_at = positions[-1] + 1 if positions else 0
        result.transforms.insert(insert_at, FilterT(adj.field, adj.operator, operands))

    elif kind == "ModifyFilter":
        positions = _filter_positions(result)
        _require(adj.index is not None and 0 <= adj.index < len(positions), "bad filter index")
        current = result.transforms[positions[adj.index]]
        operator = adj.operator if adj.operator is not None else current.operator
        operands = list(adj.operands) if adj.operands is not None else list(current.operands)
        _require(
            len(operands) == operand_arity(operator),
            f"operator {operator!r} expects {operand_arity(operator)} operand(s)",
        )
        result.transforms[positions[adj.index]] = FilterT(current.field, operator, operands)

    elif kind == "RemoveFilter":
        positions = _filter_positions(result)
        _require(adj.index is not None and 0 <= adj.index < len(positions), "bad filter index")
        del result.transforms[positions[adj.index]]

    elif kind == "AddAttribute":
        _require(adj.field is not None and dataset.has_attribute(adj.field), "unknown attribute")
        _require(
            all(e.field != adj.field for e in result.encodings.values()),
            f"{adj.field!r} is already encoded",
        )
        free = next((ch for ch in CHANNELS if ch not in result.encodings), None)
        _require(free is not None, "no free encoding channel")
        result.encodings[free] = Encoding(field=adj.field, kind=dataset.kind_of(adj.field))

    elif kind == "RemoveAttribute":
        _require(adj.field is not None, "missing attribute")
        touched = False
        for channel in list(result.encodings):
            if result.encodings[channel].field == adj.field:
                del result.encodings[channel]
                touched = True
        remaining = [t for t in result.transforms if t.field != adj.field]
        touched = touched or len(remaining) != len(result.transforms)
        result.transforms = remaining
        _require(touched, f"{adj.field!r} is not part of the specification")
        _require(
            "x" in result.encodings or "y" in result.encodings,
            "removal would leave no positional encoding",
        )

    elif kind == "ChangeAggregate":
        _require(adj.channel in result.encodings, f"channel {adj.channel!r} is not encoded")
        _require(adj.agg_fn in AGGREGATES, f"unknown aggregate: {adj.agg_fn!r}")
        encoding = result.encodings[adj.channel]
        if adj.agg_fn in ("mean", "sum", "min", "max"):
            _require(encoding.field is not None, "aggregate needs a field")
            _require(encoding.kind == QUANTITATIVE, "aggregate needs a quantitative field")
        if adj.agg_fn == "none":
            _require(encoding.field is not None, "cannot clear the aggregate of a bare count")
        encoding.aggregate = adj.agg_fn

    elif kind == "ChangeMark":
        _require(adj.mark in MARKS, f"unknown mark: {adj.mark!r}")
        result.mark = adj.mark

    elif kind == "SwapChannels":
        _require(adj.a in CHANNELS and adj.b in CHANNELS, "unknown channel")
        _require(
            adj.a in result.encodings and adj.b in result.encodings,
            f"both channels must be encoded to swap ({adj.a!r}, {adj.b!r})",
        )
        result.encodings[adj.a], result.encodings[adj.b] = (
            result.encodings[adj.b],
            result.encodings[adj.a],
        )

    elif kind == "ResolveAmbiguity":
        _require(interp is not None, "ResolveAmbiguity requires the query interpretation")
        _require(adj.token is not None and adj.field is not None, "missing token or attribute")
        ref = _ambiguous_ref_for_token(interp, adj.token)
        _require(ref is not None, f"no ambiguous reference for token {adj.token!r}")
        _require(adj.field in ref.candidates, f"{adj.field!r} is not a candidate")
        previous = ref.attribute
        if previous != adj.field:
            new_kind = dataset.kind_of(adj.field)
            for channel, encoding in result.encodings.items():
                if encoding.field == previous:
                    encoding.field = adj.field
                    encoding.kind = new_kind
                    if encoding.bin and new_kind != QUANTITATIVE:
                        encoding.bin = False
            for i, transform in enumerate(result.transforms):
                if transform.field == previous:
                    if isinstance(transform, BinT) and new_kind != QUANTITATIVE:
                        result.transforms[i] = None
                    else:
                        transform.field = adj.field
            result.transforms = [t for t in result.transforms if t is not None]

    else:
        raise InvalidAdjustment(f"unknown adjustment kind: {kind!r}")

    try:
        validate_spec(result, dataset)
    except SpecDatasetMismatch as exc:
        raise InvalidAdjustment(str(exc)) from exc
    return result


def _ambiguous_ref_for_token(interp: qi.Interpretation, token: str):
    wanted = token.lower()
    for ref in interp.attribute_refs:
        if ref.inference != qi.AMBIGUOUS:
            continue
        for span in ref.spans:
            if span.text(interp.query).lower() == wanted:
                return ref
    return None


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidAdjustment(message)
