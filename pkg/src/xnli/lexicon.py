"""Keyword lexicons driving query interpretation.

Multi-word phrases are matched longest-first. The union of all lexicons below
is the "important keyword" vocabulary used to report unparsed query parts.
"""

from __future__ import annotations

# Filter operators. ``temporal`` marks phrases that only apply to temporal
# attributes ("released after 2009").
OPERATOR_PHRASES: list[tuple[str, str, bool]] = [
    ("no less than", ">=", False),
    ("no fewer than", ">=", False),
    ("at least", ">=", False),
    ("no more than", "<=", False),
    ("at most", "<=", False),
    ("greater than", ">", False),
    ("more than", ">", False),
    ("over", ">", False),
    ("above", ">", False),
    (">", ">", False),
    (">=", ">=", False),
    ("less than", "<", False),
    ("under", "<", False),
    ("below", "<", False),
    ("<", "<", False),
    ("<=", "<=", False),
    ("between", "between", False),
    ("after", ">", True),
    ("since", ">", True),
    ("before", "<", True),
]

AGGREGATION_PHRASES: list[tuple[str, str]] = [
    ("how many", "count"),
    ("number of", "count"),
    ("count", "count"),
    ("average", "mean"),
    ("mean", "mean"),
    ("total", "sum"),
    ("sum", "sum"),
]

EXTREMUM_PHRASES: list[tuple[str, str]] = [
    ("highest", "max"),
    ("maximum", "max"),
    ("most", "max"),
    ("lowest", "min"),
    ("minimum", "min"),
]

CORRELATION_WORDS: list[str] = ["correlate", "correlated", "correlation", "relationship"]

DISTRIBUTION_PHRASES: list[str] = ["group by", "in each", "across", "per", "by", "distribution"]

TREND_PHRASES: list[str] = ["over time", "trend"]

CHART_PHRASES: list[tuple[str, str]] = [
    ("bar chart", "bar"),
    ("scatter plot", "point"),
    ("scatterplot", "point"),
    ("line chart", "line"),
    ("pie chart", "arc"),
    ("histogram", "bar"),
]

# Words that never count as "potentially important" when left unparsed.
STOPWORDS: frozenset[str] = frozenset(
    {
        "a", "an", "the", "of", "in", "on", "at", "for", "to", "and", "or",
        "is", "are", "was", "were", "be", "being", "been",
        "show", "shows", "showing", "display", "displays", "visualize",
        "plot", "draw", "give", "list", "find", "get",
        "me", "my", "i", "we", "us", "you", "please",
        "what", "which", "whose", "who", "how", "do", "does", "did",
        "with", "without", "from", "that", "this", "these", "those", "it", "its",
        "their", "there", "than", "then", "each", "all", "any", "some", "only",
        "can", "could", "would", "should", "like", "want", "need",
        "data", "dataset", "record", "records", "item", "items",
        "row", "rows", "entry", "entries", "chart", "graph", "value", "values",
    }
)


def _phrases() -> set[str]:
    vocabulary: set[str] = set()
    vocabulary.update(phrase for phrase, _, _ in OPERATOR_PHRASES)
    vocabulary.update(phrase for phrase, _ in AGGREGATION_PHRASES)
    vocabulary.update(phrase for phrase, _ in EXTREMUM_PHRASES)
    vocabulary.update(CORRELATION_WORDS)
    vocabulary.update(DISTRIBUTION_PHRASES)
    vocabulary.update(TREND_PHRASES)
    vocabulary.update(phrase for phrase, _ in CHART_PHRASES)
    return vocabulary


IMPORTANT_KEYWORDS: frozenset[str] = frozenset(_phrases())

# Every multi-word phrase is reserved before attribute matching so that e.g.
# "over time" is never read as a reference to a "Running Time" attribute.
MULTIWORD_PHRASES: tuple[str, ...] = tuple(
    sorted(
        (p for p in IMPORTANT_KEYWORDS if " " in p),
        key=lambda p: (-len(p.split()), p),
    )
)

# Suggestion tables for interaction hints: how users can phrase an intent.
OPERATOR_SUGGESTIONS: dict[str, list[str]] = {
    ">": ["more than", "over"],
    ">=": ["at least", "no less than"],
    "<": ["less than", "under"],
    "<=": ["at most", "no more than"],
    "between": ["between ... and ..."],
    "=": ["name the value directly (e.g. 'for Action movies')"],
}

TEMPORAL_OPERATOR_SUGGESTIONS: dict[str, list[str]] = {
    ">": ["after", "since"],
    "<": ["before"],
}

AGGREGATE_SUGGESTIONS: dict[str, list[str]] = {
    "mean": ["average"],
    "sum": ["total"],
    "count": ["how many", "number of"],
    "max": ["highest"],
    "min": ["lowest"],
}

MARK_REQUEST_PHRASES: dict[str, str] = {
    "bar": "bar chart",
    "point": "scatter plot",
    "line": "line chart",
    "arc": "pie chart",
}
