"""Step-by-step execution of a chart spec with data provenance.

The trace walks Load, the transforms in order, a group-aggregate stage pulled
out of the encodings, and a final Encode stage. Row counts are computed on the
full dataset; demonstration tables use a small persistent sample chosen so
that every filter shows both surviving and removed rows whenever the full
data contains both kinds.

Pinned execution semantics: nulls fail every filter and are excluded from
aggregates (count counts rows); equality on text is case-insensitive;
comparing a year number against an ISO date uses the date's year; binning
splits [min, max] into equal-width right-open intervals, closing the last.
Means and sums run on exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, log10

from .chartspec import CHANNELS, ChartSpec, FilterT, validate_spec
from .data import Dataset, NOMINAL, ORDINAL, Value

SAMPLE_SIZE = 6
ROW_KEY = "_row"

LOAD = "Load"
FILTER = "Filter"
BIN = "Bin"
GROUP_AGGREGATE = "GroupAggregate"
ENCODE = "Encode"

KEPT = "kept"
REMOVED = "removed"
MERGED = "merged-into-group"


def round_sig(value: Value, digits: int = 6) -> Value:
    """Round floats to a fixed number of significant digits for JSON output."""
    if isinstance(value, float) and value != 0.0:
        return round(value, -int(floor(log10(abs(value)))) + digits - 1)
    return value


def _as_number(value) -> int | float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return value
    return None


def passes_filter(value: Value, operator: str, operands: list) -> bool:
    """Evaluate one filter predicate against a single cell; nulls always fail."""
    if value is None:
        return False
    if operator == "=":
        return _equals(value, operands[0])
    if operator == "!=":
        return not _equals(value, operands[0])
    if operator == "contains":
        return str(operands[0]).lower() in str(value).lower()
    if operator == "between":
        low = _coerce_pair(value, operands[0])
        high = _coerce_pair(value, operands[1])
        if low is None or high is None:
            return False
        return low[1] <= low[0] and high[0] <= high[1]
    pair = _coerce_pair(value, operands[0])
    if pair is None:
        return False
    left, right = pair
    if operator == "<":
        return left < right
    if operator == "<=":
        return left <= right
    if operator == ">":
        return left > right
    if operator == ">=":
        return left >= right
    return False


def _equals(value: Value, operand) -> bool:
    left_num, right_num = _as_number(value), _as_number(operand)
    if left_num is not None and right_num is not None:
        return left_num == right_num
    return str(value).lower() == str(operand).lower()


def _coerce_pair(value: Value, operand) -> tuple | None:
    """Coerce a (cell, operand) pair into something orderable, or None."""
    left_num, right_num = _as_number(value), _as_number(operand)
    if left_num is not None and right_num is not None:
        return (left_num, right_num)
    if isinstance(value, str) and isinstance(operand, str):
        return (value.lower(), operand.lower())
    # Year numbers against ISO dates: compare on the date's year.
    if isinstance(value, str) and right_num is not None and len(value) >= 4:
        try:
            return (int(value[:4]), right_num)
        except ValueError:
            return None
    return None


@dataclass
class Cue:
    kind: str
    target: Value

    def to_json(self) -> dict:
        return {"kind": self.kind, "target": self.target}


@dataclass
class SampleRow:
    id: int | str
    values: list
    status: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "values": [round_sig(v) for v in self.values],
            "status": self.status,
        }


@dataclass
class SampleTable:
    columns: list[str]
    rows: list[SampleRow]

    def to_json(self) -> dict:
        return {"columns": list(self.columns), "rows": [r.to_json() for r in self.rows]}


@dataclass
class Step:
    op: str
    descriptor: str
    input_count: int
    output_count: int
    sample_view: SampleTable
    cues: list[Cue] = field(default_factory=list)
    # Annotation sources for the cue pass, not serialized.
    filter_field: str | None = None
    removed_ids: list[int] = field(default_factory=list)
    group_keys: list[str] = field(default_factory=list)
    link_targets: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "descriptor": self.descriptor,
            "inputCount": self.input_count,
            "outputCount": self.output_count,
            "sample": self.sample_view.to_json(),
            "cues": [c.to_json() for c in self.cues],
        }


@dataclass
class ProvenanceTrace:
    steps: list[Step]
    key_attribute: str
    relevant_columns: list[str]
    sample_row_ids: list[int]
    skipped_constraints: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "keyAttribute": self.key_attribute,
            "relevantColumns": list(self.relevant_columns),
            "sampleRowIds": list(self.sample_row_ids),
            "skippedConstraints": list(self.skipped_constraints),
            "steps": [s.to_json() for s in self.steps],
        }


def extract_group_aggregate(
    spec: ChartSpec,
) -> tuple[list[str], list[tuple[str | None, str]]]:
    """Split encoded fields into grouping dimensions and aggregated measures."""
    dims: list[str] = []
    measures: list[tuple[str | None, str]] = []
    for channel in CHANNELS:
        encoding = spec.encodings.get(channel)
        if encoding is None:
            continue
        if encoding.aggregate == "none":
            if encoding.field is not None and encoding.field not in dims:
                dims.append(encoding.field)
        else:
            entry = (encoding.field, encoding.aggregate)
            if entry not in measures:
                measures.append(entry)
    return dims, measures


def select_key_attribute(dataset: Dataset) -> str:
    """Nominal/ordinal attribute with the lowest repetition rate, else a row index."""
    best: tuple[float, int, str] | None = None
    for index, meta in enumerate(dataset.attributes):
        if meta.kind not in (NOMINAL, ORDINAL):
            continue
        rate = 1.0 - meta.distinct_count / max(dataset.row_count, 1)
        if best is None or (rate, index) < best[:2]:
            best = (rate, index, meta.name)
    return best[2] if best else ROW_KEY


@dataclass
class _BinPlan:
    field: str
    low: float
    width: float
    count: int

    def index_of(self, value: Value) -> int | None:
        number = _as_number(value)
        if number is None:
            return None
        if self.width == 0:
            return 0
        index = int((number - self.low) / self.width)
        return min(max(index, 0), self.count - 1)

    def label(self, index: int | None) -> str:
        if index is None:
            return "null"
        low = self.low + index * self.width
        high = low + self.width
        close = "]" if index == self.count - 1 else ")"
        return f"[{low:g}, {high:g}{close}"


def _plan_bins(dataset: Dataset, field_name: str, alive: list[int], max_bins: int) -> _BinPlan:
    numbers = [
        n
        for r in alive
        if (n := _as_number(dataset.rows[r][field_name])) is not None
    ]
    if not numbers:
        return _BinPlan(field_name, 0.0, 0.0, max_bins)
    low, high = min(numbers), max(numbers)
    width = (high - low) / max_bins if high > low else 0.0
    return _BinPlan(field_name, float(low), width, max_bins)


@dataclass
class GroupRow:
    """One aggregated output group with full-precision measure values."""

    key: tuple
    display: str
    row_ids: list[int]
    values: dict[str, Value]


@dataclass
class Execution:
    """Full-data execution of a spec: per-stage survivors and final groups."""

    stage_alive: list[list[int]]
    bin_plans: dict[str, _BinPlan]
    dims: list[str]
    measures: list[tuple[str | None, str]]
    groups: list[GroupRow] | None


def _aggregate(rows: list[dict], field_name: str | None, fn: str) -> Value:
    if fn == "count":
        return len(rows)
    numbers = [
        n for row in rows if (n := _as_number(row[field_name])) is not None
    ]
    if not numbers:
        return None
    if fn == "min":
        return min(numbers)
    if fn == "max":
        return max(numbers)
    total = sum((Fraction(n) for n in numbers), Fraction(0))
    if fn == "sum":
        result = total
    else:  # mean
        result = total / len(numbers)
    if result.denominator == 1:
        return int(result)
    return float(result)


def measure_label(field_name: str | None) -> str:
    return field_name if field_name is not None else "count"


def execute(spec: ChartSpec, dataset: Dataset) -> Execution:
    """Run the spec's transforms and grouping over the full dataset."""
    validate_spec(spec, dataset)
    alive = list(range(dataset.row_count))
    stage_alive: list[list[int]] = []
    bin_plans: dict[str, _BinPlan] = {}
    for transform in spec.transforms:
        if isinstance(transform, FilterT):
            alive = [
                r
                for r in alive
                if passes_filter(
                    dataset.rows[r][transform.field], transform.operator, transform.operands
                )
            ]
        else:
            bin_plans[transform.field] = _plan_bins(
                dataset, transform.field, alive, transform.max_bins
            )
        stage_alive.append(list(alive))

    dims, measures = extract_group_aggregate(spec)
    groups: list[GroupRow] | None = None
    if measures:
        order: list[tuple] = []
        members: dict[tuple, list[int]] = {}
        for r in alive:
            key_parts = []
            for dim in dims:
                value = dataset.rows[r][dim]
                if dim in bin_plans:
                    key_parts.append(bin_plans[dim].index_of(value))
                else:
                    key_parts.append(value)
            key = tuple(key_parts)
            if key not in members:
                members[key] = []
                order.append(key)
            members[key].append(r)
        groups = []
        for key in order:
            rows = [dataset.rows[r] for r in members[key]]
            values: dict[str, Value] = {}
            for i, dim in enumerate(dims):
                if dim in bin_plans:
                    values[dim] = bin_plans[dim].label(key[i])
                else:
                    values[dim] = key[i] if key[i] is not None else "null"
            for m_field, fn in measures:
                values[measure_label(m_field)] = _aggregate(rows, m_field, fn)
            display = " | ".join(str(values[dim]) for dim in dims) if dims else "all"
            groups.append(GroupRow(key, display, members[key], values))
    return Execution(stage_alive, bin_plans, dims, measures, groups)


def _filter_constraints(
    spec: ChartSpec, dataset: Dataset
) -> list[tuple[str, frozenset[int], frozenset[int]]]:
    """Per-filter (descriptor, satisfying rows, failing rows) on the full data."""
    alive = list(range(dataset.row_count))
    constraints = []
    for transform in spec.transforms:
        if not isinstance(transform, FilterT):
            continue
        sat = frozenset(
            r
            for r in alive
            if passes_filter(dataset.rows[r][transform.field], transform.operator, transform.operands)
        )
        fail = frozenset(alive) - sat
        constraints.append((format_filter(transform), sat, fail))
        alive = [r for r in alive if r in sat]
    return constraints


def _exact_sample(requirements: list[frozenset[int]], n: int) -> frozenset[int] | None:
    """Smallest-id backtracking search for <=n rows hitting every requirement."""

    def search(chosen: frozenset[int], index: int) -> frozenset[int] | None:
        if index == len(requirements):
            return chosen
        requirement = requirements[index]
        if chosen & requirement:
            return search(chosen, index + 1)
        if len(chosen) >= n:
            return None
        for row in sorted(requirement):
            result = search(chosen | {row}, index + 1)
            if result is not None:
                return result
        return None

    return search(frozenset(), 0)


def _select_sample(
    spec: ChartSpec, dataset: Dataset, n: int
) -> tuple[list[int], list[str]]:
    constraints = _filter_constraints(spec, dataset)
    skipped: list[str] = []
    requirements: list[frozenset[int]] = []
    for descriptor, sat, fail in constraints:
        if not sat or not fail:
            only = "satisfy" if sat else "fail"
            skipped.append(f"{descriptor}: all rows at this step {only} the filter")
            continue
        requirements.append(sat)
        requirements.append(fail)

    picks: list[int] = []
    chosen: set[int] = set()
    for requirement in requirements:
        if chosen & requirement:
            continue
        row = min(requirement)
        picks.append(row)
        chosen.add(row)

    if len(picks) > n:
        exact = _exact_sample(requirements, n)
        if exact is not None:
            chosen = set(exact)
        else:
            chosen = set(picks[:n])
            skipped.append(f"sample budget of {n} rows cannot cover every filter")

    target = min(n, dataset.row_count)
    for row in range(dataset.row_count):
        if len(chosen) >= target:
            break
        chosen.add(row)
    return sorted(chosen), skipped


def select_sample(spec: ChartSpec, dataset: Dataset, n: int = SAMPLE_SIZE) -> list[int]:
    """Choose up to n demonstration rows honoring the smart filter constraints."""
    if n < 2:
        raise ValueError("sample size must be at least 2")
    return _select_sample(spec, dataset, n)[0]


def format_value(value: Value) -> str:
    if value is None:
        return "null"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def format_filter(transform: FilterT) -> str:
    if transform.operator == "between":
        return (
            f"Filter: {transform.field} between "
            f"{format_value(transform.operands[0])} and {format_value(transform.operands[1])}"
        )
    return (
        f"Filter: {transform.field} {transform.operator} "
        f"{format_value(transform.operands[0])}"
    )


def build_trace(spec: ChartSpec, dataset: Dataset, n: int = SAMPLE_SIZE) -> ProvenanceTrace:
    """Execute a spec and assemble the annotated provenance trace."""
    execution = execute(spec, dataset)
    sample_ids, skipped = _select_sample(spec, dataset, n)

    key = select_key_attribute(dataset)
    relevant = spec.fields()
    if any(f is None for f, _ in execution.measures):
        relevant = relevant + ["count"]
    row_columns = [key] + [c for c in spec.fields() if c != key]

    def cell(row_id: int, column: str) -> Value:
        if column == ROW_KEY:
            return row_id
        return dataset.rows[row_id].get(column)

    def row_table(ids: list[int], status: str) -> SampleTable:
        return SampleTable(
            columns=list(row_columns),
            rows=[SampleRow(r, [cell(r, c) for c in row_columns], status) for r in ids],
        )

    steps: list[Step] = []
    total = dataset.row_count
    steps.append(
        Step(
            op=LOAD,
            descriptor=f"Load {total} rows from '{dataset.name}'",
            input_count=total,
            output_count=total,
            sample_view=row_table(sample_ids, KEPT),
        )
    )

    sample_alive = list(sample_ids)
    previous_count = total
    for stage_index, transform in enumerate(spec.transforms):
        alive_now = execution.stage_alive[stage_index]
        if isinstance(transform, FilterT):
            alive_set = set(alive_now)
            table = SampleTable(
                columns=list(row_columns),
                rows=[
                    SampleRow(
                        r,
                        [cell(r, c) for c in row_columns],
                        KEPT if r in alive_set else REMOVED,
                    )
                    for r in sample_alive
                ],
            )
            removed = [r for r in sample_alive if r not in alive_set]
            steps.append(
                Step(
                    op=FILTER,
                    descriptor=format_filter(transform),
                    input_count=previous_count,
                    output_count=len(alive_now),
                    sample_view=table,
                    filter_field=transform.field,
                    removed_ids=removed,
                )
            )
            sample_alive = [r for r in sample_alive if r in alive_set]
        else:
            steps.append(
                Step(
                    op=BIN,
                    descriptor=(
                        f"Bin: {transform.field} into {transform.max_bins} equal-width bins"
                    ),
                    input_count=previous_count,
                    output_count=len(alive_now),
                    sample_view=row_table(sample_alive, KEPT),
                    filter_field=transform.field,
                )
            )
        previous_count = len(alive_now)

    sample_groups: list[GroupRow] = []
    if execution.groups is not None:
        sample_set = set(sample_alive)
        sample_groups = [
            g for g in execution.groups if sample_set & set(g.row_ids)
        ]
        merged = SampleTable(
            columns=list(row_columns),
            rows=[
                SampleRow(r, [cell(r, c) for c in row_columns], MERGED)
                for r in sample_alive
            ],
        )
        dims_text = ", ".join(execution.dims) if execution.dims else "all rows"
        measures_text = ", ".join(
            f"{fn}({f})" if f is not None else "count" for f, fn in execution.measures
        )
        steps.append(
            Step(
                op=GROUP_AGGREGATE,
                descriptor=f"Group by {dims_text}; aggregate {measures_text}",
                input_count=previous_count,
                output_count=len(execution.groups),
                sample_view=merged,
                group_keys=[g.display for g in sample_groups],
            )
        )
        previous_count = len(execution.groups)

    encoding_text = ", ".join(
        f"{channel}={_encoding_text(spec, channel)}"
        for channel in CHANNELS
        if channel in spec.encodings
    )
    if execution.groups is not None:
        group_columns = [key] + execution.dims + [
            measure_label(f) for f, _ in execution.measures
        ]
        group_columns = list(dict.fromkeys(group_columns))
        rows = []
        for group in sample_groups:
            values = []
            for column in group_columns:
                if column in group.values:
                    values.append(group.values[column])
                elif column == key:
                    member_keys = [
                        format_value(cell(r, key))
                        for r in group.row_ids
                        if r in set(sample_alive)
                    ]
                    values.append(", ".join(member_keys))
                else:
                    values.append(None)
            rows.append(SampleRow(f"group:{group.display}", values, KEPT))
        encode_table = SampleTable(columns=group_columns, rows=rows)
        link_targets = [g.display for g in sample_groups]
    else:
        encode_table = row_table(sample_alive, KEPT)
        link_targets = list(sample_alive)

    steps.append(
        Step(
            op=ENCODE,
            descriptor=f"Encode {spec.mark} with {encoding_text}",
            input_count=previous_count,
            output_count=previous_count,
            sample_view=encode_table,
            link_targets=link_targets,
        )
    )

    trace = ProvenanceTrace(
        steps=steps,
        key_attribute=key,
        relevant_columns=relevant,
        sample_row_ids=list(sample_ids),
        skipped_constraints=skipped,
    )
    return annotate_cues(trace)


def _encoding_text(spec: ChartSpec, channel: str) -> str:
    encoding = spec.encodings[channel]
    name = encoding.field if encoding.field is not None else ""
    if encoding.aggregate != "none":
        return f"{encoding.aggregate}({name})"
    if encoding.bin:
        return f"bin({name})"
    return name


def annotate_cues(trace: ProvenanceTrace) -> ProvenanceTrace:
    """Attach visual cues: highlighted columns, struck rows, merges, mark links."""
    for step in trace.steps:
        step.cues = []
        if step.op == FILTER:
            step.cues.append(Cue("HighlightColumn", step.filter_field))
            step.cues.extend(Cue("StrikeRow", r) for r in step.removed_ids)
        elif step.op == BIN:
            step.cues.append(Cue("HighlightColumn", step.filter_field))
        elif step.op == GROUP_AGGREGATE:
            step.cues.extend(Cue("MergeCells", k) for k in step.group_keys)
        elif step.op == ENCODE:
            step.cues.extend(Cue("LinkToMark", t) for t in step.link_targets)
    return trace
