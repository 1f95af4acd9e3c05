"""Chart specifications: the (data, transforms, mark, encodings) four-tuple.

Serialization is a strict subset of the Vega-Lite v5 unit grammar so a stock
renderer consumes the JSON unmodified. Binning lives on the encoding (the
idiomatic Vega-Lite spot); internally it is also tracked as a trailing bin
transform so provenance can execute it as an explicit step.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .data import Dataset, QUANTITATIVE
from .errors import InvalidSpec, SpecDatasetMismatch

MARKS = ("bar", "point", "line", "tick", "arc")
CHANNELS = ("x", "y", "color", "size")
OPERATORS = ("<", "<=", ">", ">=", "=", "!=", "between", "contains")
AGGREGATES = ("mean", "sum", "count", "min", "max", "none")

MAX_BINS = 10

_PREDICATE_KEYS = {"lt": "<", "lte": "<=", "gt": ">", "gte": ">=", "equal": "="}
_OPERATOR_KEYS = {op: key for key, op in _PREDICATE_KEYS.items()}
_CONTAINS_EXPR = re.compile(
    r"^indexof\(lower\(datum\[(['\"])(?P<field>.*)\1\]\), (['\"])(?P<needle>.*)\3\) >= 0$"
)


def operand_arity(operator: str) -> int:
    return 2 if operator == "between" else 1


@dataclass
class FilterT:
    field: str
    operator: str
    operands: list

    def predicate_json(self) -> dict | str:
        if self.operator == "between":
            return {"field": self.field, "range": list(self.operands)}
        if self.operator == "!=":
            return {"not": {"field": self.field, "equal": self.operands[0]}}
        if self.operator == "contains":
            needle = str(self.operands[0]).lower().replace("'", "\\'")
            return f"indexof(lower(datum['{self.field}']), '{needle}') >= 0"
        return {"field": self.field, _OPERATOR_KEYS[self.operator]: self.operands[0]}


@dataclass
class BinT:
    field: str
    max_bins: int = MAX_BINS


Transform = FilterT | BinT


@dataclass
class Encoding:
    field: str | None
    kind: str
    aggregate: str = "none"
    bin: bool = False

    def to_json(self) -> dict:
        payload: dict = {}
        if self.field is not None:
            payload["field"] = self.field
        payload["type"] = self.kind
        if self.aggregate != "none":
            payload["aggregate"] = self.aggregate
        if self.bin:
            payload["bin"] = {"maxbins": MAX_BINS}
        return payload


@dataclass
class ChartSpec:
    data: str
    transforms: list[Transform] = field(default_factory=list)
    mark: str = "bar"
    encodings: dict[str, Encoding] = field(default_factory=dict)

    @property
    def filters(self) -> list[FilterT]:
        return [t for t in self.transforms if isinstance(t, FilterT)]

    @property
    def bins(self) -> list[BinT]:
        return [t for t in self.transforms if isinstance(t, BinT)]

    def fields(self) -> list[str]:
        """Every attribute named by the spec, transforms first, no duplicates."""
        names: list[str] = []
        for transform in self.transforms:
            if transform.field not in names:
                names.append(transform.field)
        for channel in CHANNELS:
            encoding = self.encodings.get(channel)
            if encoding and encoding.field and encoding.field not in names:
                names.append(encoding.field)
        return names

    def encoded_kinds(self) -> list[str]:
        """Kind multiset of the encoded attributes (count encodings excluded)."""
        kinds = [
            e.kind
            for ch in CHANNELS
            if (e := self.encodings.get(ch)) is not None and e.field is not None
        ]
        return sorted(kinds)

    def to_json(self) -> dict:
        encoding = {
            channel: self.encodings[channel].to_json()
            for channel in CHANNELS
            if channel in self.encodings
        }
        return {
            "data": {"name": self.data},
            "transform": [{"filter": f.predicate_json()} for f in self.filters],
            "mark": self.mark,
            "encoding": encoding,
        }


def _parse_predicate(predicate: dict | str) -> FilterT:
    if isinstance(predicate, str):
        m = _CONTAINS_EXPR.match(predicate)
        if not m:
            raise InvalidSpec(f"unsupported filter expression: {predicate!r}")
        return FilterT(m.group("field"), "contains", [m.group("needle").replace("\\'", "'")])
    if "not" in predicate:
        inner = predicate["not"]
        if "equal" not in inner:
            raise InvalidSpec("only negated equality filters are supported")
        return FilterT(inner["field"], "!=", [inner["equal"]])
    if "field" not in predicate:
        raise InvalidSpec(f"filter predicate missing field: {predicate!r}")
    name = predicate["field"]
    if "range" in predicate:
        bounds = predicate["range"]
        if len(bounds) != 2:
            raise InvalidSpec("range filter needs exactly two bounds")
        return FilterT(name, "between", list(bounds))
    if "oneOf" in predicate:
        values = predicate["oneOf"]
        if len(values) != 1:
            raise InvalidSpec("oneOf filters with multiple values are not supported")
        return FilterT(name, "=", list(values))
    for key, operator in _PREDICATE_KEYS.items():
        if key in predicate:
            return FilterT(name, operator, [predicate[key]])
    raise InvalidSpec(f"unsupported filter predicate: {predicate!r}")


def parse_spec(payload: dict) -> ChartSpec:
    """Parse the Vega-Lite subset back into a ChartSpec (inverse of to_json)."""
    try:
        data = payload["data"]["name"]
        mark = payload["mark"]
    except (KeyError, TypeError) as exc:
        raise InvalidSpec(f"spec is missing required keys: {exc}") from exc
    if mark not in MARKS:
        raise InvalidSpec(f"unsupported mark: {mark!r}")

    transforms: list[Transform] = []
    for entry in payload.get("transform", []):
        if "filter" not in entry:
            raise InvalidSpec(f"unsupported transform entry: {entry!r}")
        transforms.append(_parse_predicate(entry["filter"]))

    encodings: dict[str, Encoding] = {}
    for channel, enc in payload.get("encoding", {}).items():
        if channel not in CHANNELS:
            raise InvalidSpec(f"unsupported channel: {channel!r}")
        binned = bool(enc.get("bin"))
        encodings[channel] = Encoding(
            field=enc.get("field"),
            kind=enc.get("type", QUANTITATIVE),
            aggregate=enc.get("aggregate", "none"),
            bin=binned,
        )

    # Bin transforms trail the filters, in channel order.
    for channel in CHANNELS:
        encoding = encodings.get(channel)
        if encoding and encoding.bin and encoding.field:
            transforms.append(BinT(encoding.field))

    return ChartSpec(data=data, transforms=transforms, mark=mark, encodings=encodings)


def validate_spec(spec: ChartSpec, dataset: Dataset) -> None:
    """Check a spec's structural invariants against a dataset."""
    if spec.mark not in MARKS:
        raise SpecDatasetMismatch(f"unsupported mark: {spec.mark!r}")
    if "x" not in spec.encodings and "y" not in spec.encodings:
        raise SpecDatasetMismatch("spec encodes neither x nor y")
    for transform in spec.transforms:
        if not dataset.has_attribute(transform.field):
            raise SpecDatasetMismatch(f"unknown attribute in transform: {transform.field!r}")
        if isinstance(transform, FilterT):
            if transform.operator not in OPERATORS:
                raise SpecDatasetMismatch(f"unknown operator: {transform.operator!r}")
            if len(transform.operands) != operand_arity(transform.operator):
                raise SpecDatasetMismatch(
                    f"operator {transform.operator!r} expects "
                    f"{operand_arity(transform.operator)} operand(s)"
                )
    for channel, encoding in spec.encodings.items():
        if channel not in CHANNELS:
            raise SpecDatasetMismatch(f"unsupported channel: {channel!r}")
        if encoding.field is not None and not dataset.has_attribute(encoding.field):
            raise SpecDatasetMismatch(f"unknown attribute in encoding: {encoding.field!r}")
        if encoding.field is None and encoding.aggregate != "count":
            raise SpecDatasetMismatch(f"channel {channel} has no field and no count aggregate")
        if encoding.bin and encoding.kind != QUANTITATIVE:
            raise SpecDatasetMismatch("bin requires a quantitative attribute")


def specs_equal(a: ChartSpec, b: ChartSpec, *, axis_symmetry: bool = False) -> bool:
    """Structural spec equality; with axis_symmetry, x/y may be swapped on points."""
    if a.data != b.data or a.mark != b.mark or a.transforms != b.transforms:
        return False
    if a.encodings == b.encodings:
        return True
    if axis_symmetry and a.mark == "point":
        swapped = dict(b.encodings)
        swapped["x"], swapped["y"] = b.encodings.get("y"), b.encodings.get("x")
        swapped = {k: v for k, v in swapped.items() if v is not None}
        return a.encodings == swapped
    return False


@dataclass
class Adjustment:
    """A widget-driven delta against the current chart specification."""

    kind: str
    field: str | None = None
    operator: str | None = None
    operands: list | None = None
    index: int | None = None
    channel: str | None = None
    agg_fn: str | None = None
    mark: str | None = None
    a: str | None = None
    b: str | None = None
    token: str | None = None

    KINDS = (
        "AddFilter",
        "ModifyFilter",
        "RemoveFilter",
        "AddAttribute",
        "RemoveAttribute",
        "ChangeAggregate",
        "ChangeMark",
        "SwapChannels",
        "ResolveAmbiguity",
    )

    def to_json(self) -> dict:
        payload: dict = {"kind": self.kind}
        for key, value in (
            ("field", self.field),
            ("operator", self.operator),
            ("operands", self.operands),
            ("index", self.index),
            ("channel", self.channel),
            ("aggFn", self.agg_fn),
            ("mark", self.mark),
            ("a", self.a),
            ("b", self.b),
            ("token", self.token),
        ):
            if value is not None:
                payload[key] = value
        return payload

    @classmethod
    def from_json(cls, payload: dict) -> "Adjustment":
        kind = payload.get("kind")
        if kind not in cls.KINDS:
            raise InvalidSpec(f"unknown adjustment kind: {kind!r}")
        return cls(
            kind=kind,
            field=payload.get("field"),
            operator=payload.get("operator"),
            operands=payload.get("operands"),
            index=payload.get("index"),
            channel=payload.get("channel"),
            agg_fn=payload.get("aggFn"),
            mark=payload.get("mark"),
            a=payload.get("a"),
            b=payload.get("b"),
            token=payload.get("token"),
        )
