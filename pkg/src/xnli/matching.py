"""Fuzzy attribute-name matching based on edit distance.

A query token matches a compared string (an attribute name or one of its
words) when the Levenshtein distance is at most ``0.2 * len(compared)``. The
threshold has no floor, so short names effectively require exact matches.
"""

from __future__ import annotations

THRESHOLD_RATIO = 0.2


def levenshtein(a: str, b: str) -> int:
    """Classic two-row Wagner-Fischer edit distance."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(current[-1] + 1, previous[j] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def threshold(compared: str) -> float:
    return THRESHOLD_RATIO * len(compared)


def within_threshold(token: str, compared: str) -> bool:
    """True when ``token`` is a match for ``compared`` under the edit-distance rule."""
    return levenshtein(token, compared) <= threshold(compared)


def best_match(token: str, compared_strings: list[str]) -> tuple[str, int, float] | None:
    """Best fuzzy match for a token among candidate strings.

    Compares case-insensitively and returns (compared string, distance,
    normalized distance) for the lowest normalized distance within threshold,
    or None when nothing qualifies. Earlier candidates win ties.
    """
    token_lower = token.lower()
    best: tuple[str, int, float] | None = None
    for compared in compared_strings:
        compared_lower = compared.lower()
        dist = levenshtein(token_lower, compared_lower)
        if dist > threshold(compared_lower):
            continue
        normalized = dist / len(compared_lower) if compared_lower else float(dist)
        if best is None or normalized < best[2]:
            best = (compared, dist, normalized)
    return best
