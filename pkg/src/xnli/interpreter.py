"""Query interpretation: attribute references, tasks, and encoding intent.

Interpretation is a pure function of (query, dataset, preferences). Tokens are
consumed by at most one lexical role; multi-word lexicon phrases are reserved
before attribute matching so that e.g. "over time" never reads as a reference
to a "Running Time" attribute. Everything left over that looks meaningful is
reported as an unparsed keyword span.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import lexicon, matching
from .data import Dataset, QUANTITATIVE, TEMPORAL
from .errors import EmptyQuery, NotANumber

# Inference kinds.
EXPLICIT = "explicit"
IMPLICIT = "implicit"
AMBIGUOUS = "ambiguous"
DEFAULT = "default"

# Task kinds.
FILTER = "filter"
AGGREGATE = "aggregate"
CORRELATION = "correlation"
DISTRIBUTION = "distribution"
TREND = "trend"
EXTREMUM = "extremum"

_TOKEN_RE = re.compile(r"[<>]=?|[A-Za-z0-9]+(?:[.,\-][A-Za-z0-9]+)*")
_NUMERIC_RE = re.compile(r"^\$?(\d+(?:,\d+)*(?:\.\d+)?)([kmb])?$")

_SUFFIX_FACTORS = {"k": 1000, "m": 1_000_000, "b": 1_000_000_000}


@dataclass(frozen=True)
class Span:
    """Character offsets into the original query, end-exclusive."""

    start: int
    end: int

    def text(self, query: str) -> str:
        return query[self.start : self.end]

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end}


@dataclass
class AttributeRef:
    attribute: str
    candidates: list[str]
    inference: str
    spans: list[Span]

    def to_json(self) -> dict:
        return {
            "attribute": self.attribute,
            "candidates": list(self.candidates),
            "inference": self.inference,
            "spans": [s.to_json() for s in self.spans],
        }


@dataclass
class TaskRef:
    kind: str
    attribute: str | None = None
    operator: str | None = None
    operands: list = field(default_factory=list)
    agg_fn: str | None = None
    inference: str = DEFAULT
    spans: list[Span] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "attribute": self.attribute,
            "operator": self.operator,
            "operands": list(self.operands),
            "aggFn": self.agg_fn,
            "inference": self.inference,
            "spans": [s.to_json() for s in self.spans],
        }


@dataclass
class EncodingIntent:
    mark_request: str = "none"
    explicit: bool = False
    spans: list[Span] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "markRequest": self.mark_request,
            "explicit": self.explicit,
            "spans": [s.to_json() for s in self.spans],
        }


@dataclass
class Interpretation:
    query: str
    attribute_refs: list[AttributeRef]
    tasks: list[TaskRef]
    encoding_intent: EncodingIntent
    unparsed_keywords: list[Span]

    def to_json(self) -> dict:
        return {
            "query": self.query,
            "attributeRefs": [r.to_json() for r in self.attribute_refs],
            "tasks": [t.to_json() for t in self.tasks],
            "encodingIntent": self.encoding_intent.to_json(),
            "unparsedKeywords": [s.to_json() for s in self.unparsed_keywords],
        }


class PreferenceStore:
    """Token -> attribute bindings learned from ambiguity resolutions."""

    def __init__(self, entries: dict[str, str] | None = None):
        self._entries: dict[str, str] = dict(entries or {})

    def get(self, token: str) -> str | None:
        return self._entries.get(token.lower())

    def set(self, token: str, attribute: str) -> None:
        self._entries[token.lower()] = attribute

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._entries

    def to_json(self) -> dict[str, str]:
        return dict(self._entries)

    @classmethod
    def from_json(cls, payload: dict[str, str]) -> "PreferenceStore":
        return cls(payload)


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


def tokenize(query: str) -> list[Token]:
    """Lowercased tokens with character spans into the original string."""
    return [
        Token(m.group(0).lower(), m.start(), m.end())
        for m in _TOKEN_RE.finditer(query)
    ]


def parse_numeric_literal(token: str) -> int | float:
    """Parse a number token, handling commas and K/M/B magnitude suffixes."""
    m = _NUMERIC_RE.match(token.strip().lower())
    if not m:
        raise NotANumber(f"not a numeric literal: {token!r}")
    value = Fraction(m.group(1).replace(",", ""))
    if m.group(2):
        value *= _SUFFIX_FACTORS[m.group(2)]
    if value.denominator == 1:
        return int(value)
    return float(value)


def is_numeric_token(text: str) -> bool:
    return bool(_NUMERIC_RE.match(text))


@dataclass
class _PhraseHit:
    first: int
    last: int
    phrase: str
    span: Span
    bound: bool = False


class _ParseState:
    """Token consumption bookkeeping for one interpretation run."""

    def __init__(self, query: str, tokens: list[Token], dataset: Dataset):
        self.query = query
        self.tokens = tokens
        self.dataset = dataset
        self.role: list[str | None] = [None] * len(tokens)
        self.reserved: list[_PhraseHit | None] = [None] * len(tokens)
        self.hits: list[_PhraseHit] = []

    def free(self, index: int) -> bool:
        return self.role[index] is None and self.reserved[index] is None

    def consume(self, indices: range | list[int], role: str) -> None:
        for i in indices:
            self.role[i] = role

    def gram(self, first: int, last: int) -> str:
        return " ".join(t.text for t in self.tokens[first : last + 1])

    def gram_span(self, first: int, last: int) -> Span:
        return Span(self.tokens[first].start, self.tokens[last].end)


def _reserve_phrases(state: _ParseState) -> None:
    for phrase in lexicon.MULTIWORD_PHRASES:
        width = len(phrase.split())
        for first in range(len(state.tokens) - width + 1):
            last = first + width - 1
            if not all(state.free(i) for i in range(first, last + 1)):
                continue
            if state.gram(first, last) != phrase:
                continue
            hit = _PhraseHit(first, last, phrase, state.gram_span(first, last))
            state.hits.append(hit)
            for i in range(first, last + 1):
                state.reserved[i] = hit
    state.hits.sort(key=lambda h: h.first)


def _candidate_order(token_text: str, names_with_index: list[tuple[int, str]]) -> list[str]:
    return [
        name
        for _, name in sorted(
            names_with_index,
            key=lambda pair: (matching.levenshtein(token_text, pair[1].lower()), pair[0]),
        )
    ]


def _match_attributes(state: _ParseState) -> tuple[list[AttributeRef], list[TaskRef]]:
    refs: list[AttributeRef] = []
    implicit_filters: list[TaskRef] = []

    def existing(attribute: str, inference: str) -> AttributeRef | None:
        for ref in refs:
            if ref.attribute == attribute and ref.inference == inference:
                return ref
        return None

    # Name matches first (longest grams win), then cell-value matches.
    for width in (3, 2, 1):
        for first in range(len(state.tokens) - width + 1):
            last = first + width - 1
            if not all(state.free(i) for i in range(first, last + 1)):
                continue
            text = state.gram(first, last)
            if is_numeric_token(text):
                continue
            # Stopwords never name attributes, and a gram that starts or ends
            # with one ("worldwide gross is") may only match exactly.
            edge_stop = (
                state.tokens[first].text in lexicon.STOPWORDS
                or state.tokens[last].text in lexicon.STOPWORDS
            )
            matched: list[tuple[int, str]] = []
            for index, meta in enumerate(state.dataset.attributes):
                compared = [meta.name] + meta.name.split()
                best = matching.best_match(text, compared)
                if best is None:
                    continue
                if edge_stop and best[1] > 0:
                    continue
                matched.append((index, meta.name))
            if not matched:
                continue
            span = state.gram_span(first, last)
            if len(matched) == 1:
                attribute = matched[0][1]
                ref = existing(attribute, EXPLICIT)
                if ref is None:
                    refs.append(AttributeRef(attribute, [attribute], EXPLICIT, [span]))
                else:
                    ref.spans.append(span)
            else:
                candidates = _candidate_order(text, matched)
                ref = next(
                    (r for r in refs if r.inference == AMBIGUOUS and r.candidates == candidates),
                    None,
                )
                if ref is None:
                    refs.append(AttributeRef(candidates[0], candidates, AMBIGUOUS, [span]))
                else:
                    ref.spans.append(span)
            state.consume(range(first, last + 1), "attribute")

    value_index = state.dataset.value_index()
    for width in (3, 2, 1):
        for first in range(len(state.tokens) - width + 1):
            last = first + width - 1
            if not all(state.free(i) for i in range(first, last + 1)):
                continue
            text = state.gram(first, last)
            if text not in value_index:
                continue
            attribute, value = value_index[text]
            span = state.gram_span(first, last)
            ref = existing(attribute, IMPLICIT)
            if ref is None:
                refs.append(AttributeRef(attribute, [attribute], IMPLICIT, [span]))
                implicit_filters.append(
                    TaskRef(
                        kind=FILTER,
                        attribute=attribute,
                        operator="=",
                        operands=[value],
                        inference=IMPLICIT,
                        spans=[span],
                    )
                )
            else:
                ref.spans.append(span)
                for task in implicit_filters:
                    if task.attribute == attribute and task.operands == [value]:
                        task.spans.append(span)
                        break
            state.consume(range(first, last + 1), "value")

    refs.sort(key=lambda r: r.spans[0].start if r.spans else len(state.query))
    return refs, implicit_filters


def _nearest_ref(
    refs: list[AttributeRef],
    phrase_span: Span,
    eligible: "callable",
) -> AttributeRef | None:
    """Nearest eligible ref: preceding spans first, then following ones."""
    preceding: tuple[int, int, AttributeRef] | None = None
    following: tuple[int, int, AttributeRef] | None = None
    for order, ref in enumerate(refs):
        if not eligible(ref):
            continue
        for span in ref.spans:
            if span.end <= phrase_span.start:
                key = (phrase_span.start - span.end, order, ref)
                if preceding is None or key[:2] < preceding[:2]:
                    preceding = key
            elif span.start >= phrase_span.end:
                key = (span.start - phrase_span.end, order, ref)
                if following is None or key[:2] < following[:2]:
                    following = key
    if preceding is not None:
        return preceding[2]
    if following is not None:
        return following[2]
    return None


def _nearest_following_ref(
    refs: list[AttributeRef],
    phrase_span: Span,
    eligible: "callable",
) -> AttributeRef | None:
    """Nearest eligible ref, preferring following spans (used for grouping)."""
    preceding: tuple[int, int, AttributeRef] | None = None
    following: tuple[int, int, AttributeRef] | None = None
    for order, ref in enumerate(refs):
        if not eligible(ref):
            continue
        for span in ref.spans:
            if span.start >= phrase_span.end:
                key = (span.start - phrase_span.end, order, ref)
                if following is None or key[:2] < following[:2]:
                    following = key
            elif span.end <= phrase_span.start:
                key = (phrase_span.start - span.end, order, ref)
                if preceding is None or key[:2] < preceding[:2]:
                    preceding = key
    if following is not None:
        return following[2]
    if preceding is not None:
        return preceding[2]
    return None


def _ref_span_near(ref: AttributeRef, phrase_span: Span) -> Span | None:
    best: tuple[int, Span] | None = None
    for span in ref.spans:
        distance = min(abs(phrase_span.start - span.end), abs(span.start - phrase_span.end))
        if best is None or distance < best[0]:
            best = (distance, span)
    return best[1] if best else None


@dataclass
class _Site:
    """One lexicon trigger found in the query (a reserved phrase or a single token)."""

    first: int
    last: int
    phrase: str
    span: Span
    hit: _PhraseHit | None = None


def _find_sites(state: _ParseState, vocabulary: set[str]) -> list[_Site]:
    sites: list[_Site] = []
    for hit in state.hits:
        if not hit.bound and hit.phrase in vocabulary and all(
            state.role[i] is None for i in range(hit.first, hit.last + 1)
        ):
            sites.append(_Site(hit.first, hit.last, hit.phrase, hit.span, hit))
    for index, token in enumerate(state.tokens):
        if state.free(index) and token.text in vocabulary:
            sites.append(_Site(index, index, token.text, token.span))
    sites.sort(key=lambda s: s.first)
    return sites


def _claim(state: _ParseState, site: _Site, role: str) -> None:
    state.consume(range(site.first, site.last + 1), role)
    if site.hit is not None:
        site.hit.bound = True


def _next_numeric(state: _ParseState, after: int) -> int | None:
    for index in range(after, len(state.tokens)):
        if state.free(index) and is_numeric_token(state.tokens[index].text):
            return index
    return None


def _extract_tasks(
    state: _ParseState,
    refs: list[AttributeRef],
    implicit_filters: list[TaskRef],
) -> list[TaskRef]:
    dataset = state.dataset
    tasks: list[TaskRef] = list(implicit_filters)

    def resolved_kind(ref: AttributeRef) -> str:
        return dataset.kind_of(ref.attribute)

    # Comparison filters first, since they claim numeric operands.
    operator_table = {phrase: (op, temporal) for phrase, op, temporal in lexicon.OPERATOR_PHRASES}
    for site in _find_sites(state, set(operator_table)):
        operator, temporal_only = operator_table[site.phrase]
        if temporal_only:
            eligible = lambda r: r.inference != IMPLICIT and resolved_kind(r) == TEMPORAL
        else:
            eligible = lambda r: r.inference != IMPLICIT and resolved_kind(r) in (
                QUANTITATIVE,
                TEMPORAL,
            )
        ref = _nearest_ref(refs, site.span, eligible)
        if ref is None:
            continue

        operand_indices: list[int] = []
        first_operand = _next_numeric(state, site.last + 1)
        if first_operand is None:
            continue
        operand_indices.append(first_operand)
        if operator == "between":
            second_operand = _next_numeric(state, first_operand + 1)
            if second_operand is None:
                continue
            operand_indices.append(second_operand)
            # The "and" between the bounds belongs to the phrase.
            for middle in range(first_operand + 1, second_operand):
                if state.free(middle) and state.tokens[middle].text == "and":
                    state.consume([middle], "operator")

        operands = [parse_numeric_literal(state.tokens[i].text) for i in operand_indices]
        if operator == "between":
            operands.sort()
        _claim(state, site, "operator")
        state.consume(operand_indices, "operand")
        spans = [site.span] + [state.tokens[i].span for i in operand_indices]
        anchor = _ref_span_near(ref, site.span)
        if anchor is not None:
            spans.insert(0, anchor)
        tasks.append(
            TaskRef(
                kind=FILTER,
                attribute=ref.attribute,
                operator=operator,
                operands=operands,
                inference=EXPLICIT,
                spans=spans,
            )
        )

    aggregate_table = dict(lexicon.AGGREGATION_PHRASES)
    for site in _find_sites(state, set(aggregate_table)):
        agg_fn = aggregate_table[site.phrase]
        if agg_fn == "count":
            _claim(state, site, "aggregate")
            tasks.append(
                TaskRef(kind=AGGREGATE, agg_fn="count", inference=EXPLICIT, spans=[site.span])
            )
            continue
        eligible = lambda r: r.inference != IMPLICIT and resolved_kind(r) == QUANTITATIVE
        ref = _nearest_following_ref(refs, site.span, eligible)
        if ref is None:
            continue
        _claim(state, site, "aggregate")
        tasks.append(
            TaskRef(
                kind=AGGREGATE,
                attribute=ref.attribute,
                agg_fn=agg_fn,
                inference=EXPLICIT,
                spans=[site.span],
            )
        )

    extremum_table = dict(lexicon.EXTREMUM_PHRASES)
    for site in _find_sites(state, set(extremum_table)):
        eligible = lambda r: r.inference != IMPLICIT and resolved_kind(r) == QUANTITATIVE
        ref = _nearest_following_ref(refs, site.span, eligible)
        if ref is None:
            continue
        _claim(state, site, "extremum")
        tasks.append(
            TaskRef(
                kind=EXTREMUM,
                attribute=ref.attribute,
                agg_fn=extremum_table[site.phrase],
                inference=EXPLICIT,
                spans=[site.span],
            )
        )

    for site in _find_sites(state, set(lexicon.CORRELATION_WORDS)):
        _claim(state, site, "correlation")
        tasks.append(TaskRef(kind=CORRELATION, inference=EXPLICIT, spans=[site.span]))

    for site in _find_sites(state, set(lexicon.DISTRIBUTION_PHRASES)):
        eligible = lambda r: r.inference != IMPLICIT
        ref = _nearest_following_ref(refs, site.span, eligible)
        if ref is None:
            continue
        _claim(state, site, "distribution")
        tasks.append(
            TaskRef(
                kind=DISTRIBUTION,
                attribute=ref.attribute,
                inference=EXPLICIT,
                spans=[site.span],
            )
        )

    for site in _find_sites(state, set(lexicon.TREND_PHRASES)):
        eligible = lambda r: r.inference != IMPLICIT and resolved_kind(r) == TEMPORAL
        ref = _nearest_ref(refs, site.span, eligible)
        if ref is None:
            temporal = [m.name for m in dataset.attributes if m.kind == TEMPORAL]
            if not temporal:
                continue
            ref = AttributeRef(temporal[0], [temporal[0]], DEFAULT, [])
            refs.append(ref)
        _claim(state, site, "trend")
        tasks.append(
            TaskRef(kind=TREND, attribute=ref.attribute, inference=EXPLICIT, spans=[site.span])
        )

    tasks.sort(key=lambda t: t.spans[0].start if t.spans else len(state.query))
    return tasks


def _extract_mark_intent(state: _ParseState) -> EncodingIntent:
    chart_table = dict(lexicon.CHART_PHRASES)
    intent = EncodingIntent()
    for site in _find_sites(state, set(chart_table)):
        _claim(state, site, "chart")
        if not intent.explicit:
            intent = EncodingIntent(chart_table[site.phrase], True, [site.span])
        else:
            intent.spans.append(site.span)
    return intent


def _collect_unparsed(state: _ParseState) -> list[Span]:
    ignorable = set(lexicon.STOPWORDS)
    name = state.dataset.name.lower()
    ignorable.add(name)
    if name.endswith("s"):
        ignorable.add(name[:-1])

    spans: list[Span] = []
    covered: set[int] = set()
    for hit in state.hits:
        if hit.bound:
            continue
        if any(state.role[i] is not None for i in range(hit.first, hit.last + 1)):
            continue
        spans.append(hit.span)
        covered.update(range(hit.first, hit.last + 1))

    run: list[int] = []

    def flush() -> None:
        if run:
            spans.append(Span(state.tokens[run[0]].start, state.tokens[run[-1]].end))
            run.clear()

    for index, token in enumerate(state.tokens):
        leftover = (
            index not in covered
            and state.role[index] is None
            and state.reserved[index] is None
            and token.text not in ignorable
        )
        if leftover and (not run or run[-1] == index - 1):
            run.append(index)
        else:
            flush()
            if leftover:
                run.append(index)
    flush()

    spans.sort(key=lambda s: s.start)
    return spans


def match_attributes(tokens: list[Token], dataset: Dataset) -> list[AttributeRef]:
    """Attribute references for a token list (names, fuzzy names, cell values)."""
    query = "" if not tokens else " " * tokens[-1].end
    state = _ParseState(query, tokens, dataset)
    _reserve_phrases(state)
    refs, _ = _match_attributes(state)
    return refs


def extract_tasks(
    tokens: list[Token], attribute_refs: list[AttributeRef], dataset: Dataset
) -> list[TaskRef]:
    """Tasks for a token list given already-matched attribute references."""
    query = "" if not tokens else " " * tokens[-1].end
    state = _ParseState(query, tokens, dataset)
    _reserve_phrases(state)
    span_starts = {
        (span.start, span.end) for ref in attribute_refs for span in ref.spans
    }
    for index, token in enumerate(tokens):
        if any(start <= token.start and token.end <= end for start, end in span_starts):
            state.role[index] = "attribute"
    return _extract_tasks(state, attribute_refs, [])


def interpret(
    query: str, dataset: Dataset, prefs: PreferenceStore | None = None
) -> Interpretation:
    """Parse one natural-language query against a dataset into an Interpretation."""
    if not query or not query.strip():
        raise EmptyQuery("query is empty")
    state = _ParseState(query, tokenize(query), dataset)
    _reserve_phrases(state)
    refs, implicit_filters = _match_attributes(state)

    if prefs is not None:
        for ref in refs:
            if ref.inference != AMBIGUOUS:
                continue
            for span in ref.spans:
                preferred = prefs.get(span.text(query))
                if preferred and preferred in ref.candidates:
                    ref.attribute = preferred
                    break

    tasks = _extract_tasks(state, refs, implicit_filters)
    intent = _extract_mark_intent(state)
    unparsed = _collect_unparsed(state)
    return Interpretation(
        query=query,
        attribute_refs=refs,
        tasks=tasks,
        encoding_intent=intent,
        unparsed_keywords=unparsed,
    )
