"""Independent reference implementations used to check the engine.

These deliberately avoid the engine's code paths: the edit distance is a
memoized recursion instead of the iterative table, and the executor is a
straight re-reading of the pinned execution semantics over plain dicts.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance via memoized recursion."""

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(go(i - 1, j) + 1, go(i, j - 1) + 1, go(i - 1, j - 1) + cost)

    result = go(len(a), len(b))
    go.cache_clear()
    return result


def count_values(column: list) -> dict:
    """Occurrence counts of non-null values by brute-force recount."""
    counts: dict = {}
    for value in column:
        if value is None:
            continue
        counts[value] = counts.get(value, 0) + 1
    return counts


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def filter_passes(value, operator: str, operands: list) -> bool:
    """Reference filter semantics: nulls fail, text equality is case-insensitive."""
    if value is None:
        return False
    if operator in ("=", "!="):
        if _is_number(value) and _is_number(operands[0]):
            hit = value == operands[0]
        else:
            hit = str(value).lower() == str(operands[0]).lower()
        return hit if operator == "=" else not hit
    if operator == "contains":
        return str(operands[0]).lower() in str(value).lower()

    def orderable(operand):
        if _is_number(value) and _is_number(operand):
            return value, operand
        if isinstance(value, str) and isinstance(operand, str):
            return value.lower(), operand.lower()
        if isinstance(value, str) and _is_number(operand) and len(value) >= 4:
            try:
                return int(value[:4]), operand
            except ValueError:
                return None
        return None

    if operator == "between":
        low = orderable(operands[0])
        high = orderable(operands[1])
        return low is not None and high is not None and low[1] <= low[0] <= high[1]
    pair = orderable(operands[0])
    if pair is None:
        return False
    left, right = pair
    return {
        "<": left < right,
        "<=": left <= right,
        ">": left > right,
        ">=": left >= right,
    }[operator]


def bin_index(value, low: float, high: float, max_bins: int):
    if not _is_number(value):
        return None
    if high <= low:
        return 0
    width = (high - low) / max_bins
    return min(max(int((value - low) / width), 0), max_bins - 1)


def execute_reference(
    rows: list[dict],
    filters: list[tuple[str, str, list]],
    bin_fields: list[str],
    dims: list[str],
    measures: list[tuple[str | None, str]],
    max_bins: int = 10,
) -> dict:
    """Re-execute a plan: filters in order, then bins, then group-aggregate.

    Returns per-stage row counts, the surviving row ids, and (when measures
    are present) a map from group key tuple to measure-label -> value.
    """
    alive = list(range(len(rows)))
    stage_counts = []
    for field, operator, operands in filters:
        alive = [r for r in alive if filter_passes(rows[r].get(field), operator, operands)]
        stage_counts.append(len(alive))

    bin_plans: dict[str, tuple[float, float]] = {}
    for field in bin_fields:
        numbers = [rows[r][field] for r in alive if _is_number(rows[r][field])]
        if numbers:
            bin_plans[field] = (min(numbers), max(numbers))
        else:
            bin_plans[field] = (0.0, 0.0)
        stage_counts.append(len(alive))

    groups = None
    if measures:
        order: list[tuple] = []
        members: dict[tuple, list[int]] = {}
        for r in alive:
            parts = []
            for dim in dims:
                value = rows[r].get(dim)
                if dim in bin_plans:
                    low, high = bin_plans[dim]
                    parts.append(bin_index(value, low, high, max_bins))
                else:
                    parts.append(value)
            key = tuple(parts)
            if key not in members:
                members[key] = []
                order.append(key)
            members[key].append(r)
        groups = {}
        for key in order:
            out = {}
            for field, fn in measures:
                label = field if field is not None else "count"
                if fn == "count":
                    out[label] = len(members[key])
                    continue
                numbers = [
                    rows[r][field] for r in members[key] if _is_number(rows[r][field])
                ]
                if not numbers:
                    out[label] = None
                elif fn == "min":
                    out[label] = min(numbers)
                elif fn == "max":
                    out[label] = max(numbers)
                elif fn == "sum":
                    out[label] = sum(numbers)
                else:
                    out[label] = sum(numbers) / len(numbers)
            groups[key] = out
    return {"stage_counts": stage_counts, "alive": alive, "groups": groups}


def sample_satisfies(
    sample: set[int],
    rows: list[dict],
    filters: list[tuple[str, str, list]],
) -> bool:
    """Check the smart-sampling requirement for a candidate sample."""
    alive = list(range(len(rows)))
    sample_alive = [r for r in sorted(sample)]
    for field, operator, operands in filters:
        sat_full = {r for r in alive if filter_passes(rows[r].get(field), operator, operands)}
        fail_full = set(alive) - sat_full
        if sat_full and fail_full:
            sat_sample = [r for r in sample_alive if r in sat_full]
            fail_sample = [r for r in sample_alive if r not in sat_full]
            if not sat_sample or not fail_sample:
                return False
        alive = [r for r in alive if r in sat_full]
        sample_alive = [r for r in sample_alive if r in sat_full]
    return True


def satisfying_sample_exists(
    rows: list[dict],
    filters: list[tuple[str, str, list]],
    n: int,
) -> bool:
    """Exhaustive subset search for a sample of size <= n meeting the constraints."""
    ids = range(len(rows))
    for size in range(min(n, len(rows)) + 1):
        for subset in combinations(ids, size):
            if sample_satisfies(set(subset), rows, filters):
                return True
    return False
