"""Tabular data substrate: CSV loading, attribute typing, and dataset metadata.

Datasets are immutable after load and safe to share across readers. Values are
plain Python scalars: numbers for quantitative columns, strings for
nominal/ordinal ones, and either 4-digit year integers or ISO date strings for
temporal ones. Empty CSV cells become ``None``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import re
from dataclasses import dataclass, field

from .errors import DuplicateHeader, EmptyDataset, MalformedCsv, UnknownAttribute

QUANTITATIVE = "quantitative"
NOMINAL = "nominal"
ORDINAL = "ordinal"
TEMPORAL = "temporal"

KINDS = (QUANTITATIVE, NOMINAL, ORDINAL, TEMPORAL)

Value = None | int | float | str
Row = dict[str, Value]

# Knobs for attribute typing and the data overview.
K_TYPICAL = 5
PARSE_SHARE = 0.95
ORDINAL_MAX_DISTINCT = 12

# A column is ordinal when all of its values fall inside one of these
# vocabularies (case-insensitive).
ORDINAL_VOCABULARIES: tuple[frozenset[str], ...] = (
    frozenset({"low", "medium", "high"}),
    frozenset({"small", "medium", "large"}),
    frozenset({"poor", "fair", "good", "very good", "excellent"}),
    frozenset({"monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"}),
    frozenset(
        {
            "january", "february", "march", "april", "may", "june",
            "july", "august", "september", "october", "november", "december",
        }
    ),
)

_ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_YEAR_INT = re.compile(r"^[12]\d{3}$")
_TEMPORAL_HEADER_WORDS = ("year", "date", "time")


def parse_number(raw: str) -> int | float | None:
    """Parse a cell as a number, tolerating thousands separators."""
    text = raw.strip().replace(",", "")
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    if value.is_integer() and "e" not in text.lower() and "." not in text:
        return int(text)
    return value


def _is_iso_date(raw: str) -> bool:
    return bool(_ISO_DATE.match(raw.strip()))


def _is_year(raw: str) -> bool:
    return bool(_YEAR_INT.match(raw.strip()))


def infer_attribute_kind(column: list[str], header: str | None = None) -> str:
    """Infer the attribute kind for a column of raw CSV strings.

    Precedence: temporal (ISO dates, or 4-digit years when the header hints at
    a time axis), then quantitative, then ordinal (small vocabularies with a
    natural order), then nominal. An all-null column is nominal. When no
    header is supplied the year pattern alone is decisive.
    """
    non_null = [cell for cell in column if cell is not None and cell != ""]
    if not non_null:
        return NOMINAL

    total = len(non_null)
    iso_share = sum(1 for cell in non_null if _is_iso_date(cell)) / total
    year_share = sum(1 for cell in non_null if _is_year(cell)) / total
    header_hint = header is None or any(
        word in header.lower() for word in _TEMPORAL_HEADER_WORDS
    )
    if iso_share >= PARSE_SHARE:
        return TEMPORAL
    if year_share >= PARSE_SHARE and header_hint:
        return TEMPORAL

    numeric_share = sum(1 for cell in non_null if parse_number(cell) is not None) / total
    if numeric_share >= PARSE_SHARE:
        return QUANTITATIVE

    lowered = {cell.strip().lower() for cell in non_null}
    if len(lowered) <= ORDINAL_MAX_DISTINCT and any(
        lowered <= vocab for vocab in ORDINAL_VOCABULARIES
    ):
        return ORDINAL

    return NOMINAL


def _parse_cell(raw: str, kind: str) -> Value:
    """Convert a raw cell to a typed value; cells the kind cannot hold become null."""
    if raw == "":
        return None
    if kind == QUANTITATIVE:
        return parse_number(raw)
    if kind == TEMPORAL:
        if _is_year(raw):
            return int(raw.strip())
        if _is_iso_date(raw):
            return raw.strip()
        return None
    return raw


@dataclass
class AttributeMeta:
    """Metadata shown in the data overview for one attribute."""

    name: str
    kind: str
    typical_values: list[Value]
    distinct_count: int
    null_count: int

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "typicalValues": list(self.typical_values),
            "distinctCount": self.distinct_count,
        }


@dataclass
class Dataset:
    """An immutable tabular dataset with typed attribute metadata."""

    id: str
    name: str
    attributes: list[AttributeMeta]
    rows: list[Row]
    row_count: int
    _value_index: dict[str, tuple[str, str]] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def attribute(self, name: str) -> AttributeMeta:
        for meta in self.attributes:
            if meta.name == name:
                return meta
        raise UnknownAttribute(f"unknown attribute: {name!r}")

    def has_attribute(self, name: str) -> bool:
        return any(meta.name == name for meta in self.attributes)

    def column(self, name: str) -> list[Value]:
        self.attribute(name)
        return [row[name] for row in self.rows]

    def kind_of(self, name: str) -> str:
        return self.attribute(name).kind

    def value_index(self) -> dict[str, tuple[str, str]]:
        """Map lowercased nominal/ordinal cell text to (attribute, canonical value).

        First column and then first row wins on collisions, so lookups are
        deterministic.
        """
        if self._value_index is None:
            index: dict[str, tuple[str, str]] = {}
            for meta in self.attributes:
                if meta.kind not in (NOMINAL, ORDINAL):
                    continue
                for row in self.rows:
                    value = row[meta.name]
                    if value is None:
                        continue
                    key = str(value).lower()
                    if key not in index:
                        index[key] = (meta.name, str(value))
            self._value_index = index
        return self._value_index

    def overview_json(self) -> dict:
        return {
            "name": self.name,
            "attributes": [meta.to_json() for meta in self.attributes],
            "rowCount": self.row_count,
        }


def typical_values(dataset: Dataset, attribute: str, k: int) -> list[Value]:
    """Top-k non-null values by occurrence count, ties broken by first appearance."""
    column = dataset.column(attribute)
    counts: dict[Value, int] = {}
    first_seen: dict[Value, int] = {}
    for position, value in enumerate(column):
        if value is None:
            continue
        counts[value] = counts.get(value, 0) + 1
        first_seen.setdefault(value, position)
    ranked = sorted(counts, key=lambda v: (-counts[v], first_seen[v]))
    return ranked[: max(k, 0)]


def _build_meta(name: str, raw_column: list[str], typed_column: list[Value]) -> AttributeMeta:
    kind = infer_attribute_kind(raw_column, header=name)
    non_null = [v for v in typed_column if v is not None]
    counts: dict[Value, int] = {}
    first_seen: dict[Value, int] = {}
    for position, value in enumerate(non_null):
        counts[value] = counts.get(value, 0) + 1
        first_seen.setdefault(value, position)
    ranked = sorted(counts, key=lambda v: (-counts[v], first_seen[v]))
    return AttributeMeta(
        name=name,
        kind=kind,
        typical_values=ranked[:K_TYPICAL],
        distinct_count=len(counts),
        null_count=len(typed_column) - len(non_null),
    )


def load_csv(source: bytes | io.IOBase, name: str) -> Dataset:
    """Load an RFC 4180 CSV (UTF-8, header row required) into a Dataset."""
    if isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"CSV is not valid UTF-8: {exc}") from exc

    reader = csv.reader(io.StringIO(text), strict=True)
    try:
        records = list(reader)
    except csv.Error as exc:
        raise MalformedCsv(f"CSV parse error: {exc}") from exc

    # Trailing blank line from a final CRLF is not a record.
    records = [r for r in records if r != []]
    if not records:
        raise EmptyDataset("CSV has no header row")

    header, *data = records
    if any(col.strip() == "" for col in header):
        raise MalformedCsv("CSV header contains an empty column name")
    seen: set[str] = set()
    for col in header:
        lowered = col.lower()
        if lowered in seen:
            raise DuplicateHeader(f"duplicate header column: {col!r}")
        seen.add(lowered)
    if not data:
        raise EmptyDataset("CSV has a header but no data rows")

    for line_number, record in enumerate(data, start=2):
        if len(record) != len(header):
            raise MalformedCsv(
                f"row {line_number} has {len(record)} fields, expected {len(header)}"
            )

    columns = {col: [record[i] for record in data] for i, col in enumerate(header)}
    kinds = {col: infer_attribute_kind(columns[col], header=col) for col in header}
    typed_columns = {
        col: [_parse_cell(cell, kinds[col]) for cell in columns[col]] for col in header
    }

    attributes = [_build_meta(col, columns[col], typed_columns[col]) for col in header]
    rows: list[Row] = [
        {col: typed_columns[col][i] for col in header} for i in range(len(data))
    ]
    digest = hashlib.sha256(name.encode("utf-8") + b"\x00" + raw).hexdigest()[:12]
    return Dataset(
        id=digest,
        name=name,
        attributes=attributes,
        rows=rows,
        row_count=len(rows),
    )
