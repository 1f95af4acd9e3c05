"""Diagnosis and suggestion rules: query problems and widget-interaction feedback.

Rule-based hints are computed from one pipeline run (query, interpretation,
trace). Interaction-based hints read the delta between the engine's spec and
the user's adjusted spec and teach the query phrasing that would have produced
the adjusted result directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import interpreter as qi
from . import lexicon, matching
from .chartspec import Adjustment, ChartSpec
from .data import Dataset, TEMPORAL
from .errors import InconsistentDelta, NoValidExample, XnliError
from .provenance import ProvenanceTrace
from .query_examples import QueryExample, generate_examples
from .synthesize import apply_adjustment, recommended_mark, suitable_marks, synthesize

UNUSED_KEYWORD = "UnusedKeyword"
MISSPELLING = "Misspelling"
ATTRIBUTE_AMBIGUITY = "AttributeAmbiguity"
EMPTY_RESULT = "EmptyResult"
UNSUITABLE_ENCODING = "UnsuitableEncoding"
FAILURE_OF_INFERENCE = "FailureOfInference"
UNEXPECTED_DEPENDENCY = "UnexpectedDependency"
UNEXPECTED_ATTRIBUTE_TYPE = "UnexpectedAttributeType"
UNEXPECTED_TASK_TYPE = "UnexpectedTaskType"
FILTER_REVISION = "FilterRevision"
EXPLICIT_MARK_SUGGESTION = "ExplicitMarkSuggestion"

EMPTY_RESULT_MESSAGE = "No records satisfy the filter criteria."

_SEVERITY = {
    EMPTY_RESULT: 0,
    MISSPELLING: 1,
    ATTRIBUTE_AMBIGUITY: 2,
    UNUSED_KEYWORD: 3,
    UNSUITABLE_ENCODING: 4,
}


@dataclass
class Hint:
    kind: str
    message: str
    spans: list[qi.Span] = field(default_factory=list)
    suggestions: list[str] = field(default_factory=list)
    examples: list[QueryExample] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "message": self.message,
            "spans": [s.to_json() for s in self.spans],
            "suggestions": list(self.suggestions),
            "examples": [{"text": e.text} for e in self.examples],
        }


def _misspelling_hints(query: str, interp: qi.Interpretation) -> list[Hint]:
    hints: list[Hint] = []
    reported: set[tuple[str, str]] = set()
    for ref in interp.attribute_refs:
        if ref.inference not in (qi.EXPLICIT, qi.AMBIGUOUS):
            continue
        for span in ref.spans:
            token = span.text(query)
            compared = [ref.attribute] + ref.attribute.split()
            best = matching.best_match(token, compared)
            if best is None or best[1] == 0:
                continue
            key = (token.lower(), ref.attribute)
            if key in reported:
                continue
            reported.add(key)
            hints.append(
                Hint(
                    kind=MISSPELLING,
                    message=(
                        f"'{token}' looks like a misspelling; "
                        f"it was read as '{ref.attribute}'."
                    ),
                    spans=[span],
                    suggestions=[ref.attribute],
                )
            )
    return hints


def _empty_result_hint(interp: qi.Interpretation, trace: ProvenanceTrace) -> Hint | None:
    zero_step = next((s for s in trace.steps if s.output_count == 0), None)
    if zero_step is None:
        return None
    spans: list[qi.Span] = []
    if zero_step.filter_field is not None:
        for task in interp.tasks:
            if task.kind == qi.FILTER and task.attribute == zero_step.filter_field:
                spans = list(task.spans)
                break
    return Hint(kind=EMPTY_RESULT, message=EMPTY_RESULT_MESSAGE, spans=spans)


def rule_based_hints(
    query: str,
    interp: qi.Interpretation,
    trace: ProvenanceTrace,
    dataset: Dataset,
    spec: ChartSpec | None = None,
) -> list[Hint]:
    """Hints for problems detectable from a single query run, severity-ordered."""
    hints: list[Hint] = []

    empty = _empty_result_hint(interp, trace)
    if empty is not None:
        hints.append(empty)

    hints.extend(_misspelling_hints(query, interp))

    for ref in interp.attribute_refs:
        if ref.inference != qi.AMBIGUOUS:
            continue
        token = ref.spans[0].text(query) if ref.spans else "the query"
        options = " or ".join(f"'{c}'" for c in ref.candidates)
        hints.append(
            Hint(
                kind=ATTRIBUTE_AMBIGUITY,
                message=(
                    f"'{token}' may refer to {options}; "
                    f"'{ref.attribute}' was chosen."
                ),
                spans=list(ref.spans),
                suggestions=list(ref.candidates),
            )
        )

    for span in interp.unparsed_keywords:
        text = span.text(query)
        hints.append(
            Hint(
                kind=UNUSED_KEYWORD,
                message=f"The keyword '{text}' was not used to build the chart.",
                spans=[span],
            )
        )

    if spec is None:
        try:
            spec = synthesize(interp, dataset)
        except XnliError:
            spec = None
    if spec is not None:
        kinds = spec.encoded_kinds()
        if spec.mark not in suitable_marks(kinds):
            better = recommended_mark(kinds)
            suggestion = [better] if better else []
            better_text = f"; consider a {better} chart" if better else ""
            hints.append(
                Hint(
                    kind=UNSUITABLE_ENCODING,
                    message=(
                        f"A {spec.mark} chart is not well suited to these "
                        f"attributes{better_text}."
                    ),
                    spans=list(interp.encoding_intent.spans),
                    suggestions=suggestion,
                )
            )

    hints.sort(key=lambda h: _SEVERITY.get(h.kind, 99))
    return hints


def _examples_for(
    spec: ChartSpec, dataset: Dataset | None, seed: int | None
) -> list[QueryExample]:
    if dataset is None or seed is None:
        return []
    try:
        valid, _ = generate_examples(spec, dataset, seed)
    except NoValidExample:
        return []
    return valid


def interaction_hints(
    before: ChartSpec,
    adj: Adjustment,
    after: ChartSpec,
    interp: qi.Interpretation,
    dataset: Dataset | None = None,
    seed: int | None = None,
) -> list[Hint]:
    """Feedback for one widget adjustment, per the fixed interaction rule table."""
    if dataset is not None:
        recomputed = apply_adjustment(before, adj, dataset, interp)
        if recomputed != after:
            raise InconsistentDelta("adjusted spec does not match the applied delta")

    kind = adj.kind
    if kind == "AddAttribute":
        mentioned = {r.attribute for r in interp.attribute_refs}
        for ref in interp.attribute_refs:
            mentioned.update(ref.candidates)
        if adj.field not in mentioned:
            return [
                Hint(
                    kind=FAILURE_OF_INFERENCE,
                    message=(
                        f"'{adj.field}' was not inferred from the query; "
                        f"mention '{adj.field}' explicitly next time."
                    ),
                    suggestions=[adj.field],
                )
            ]
        return [
            Hint(
                kind=UNEXPECTED_DEPENDENCY,
                message=(
                    f"'{adj.field}' was mentioned but attached to a different task; "
                    "try rephrasing the sentence, e.g. one of the examples."
                ),
                suggestions=[adj.field],
                examples=_examples_for(after, dataset, seed),
            )
        ]

    if kind == "RemoveAttribute":
        implicit = next(
            (
                r
                for r in interp.attribute_refs
                if r.inference == qi.IMPLICIT and r.attribute == adj.field
            ),
            None,
        )
        if implicit is None:
            return []
        words = ", ".join(f"'{s.text(interp.query)}'" for s in implicit.spans)
        return [
            Hint(
                kind=UNEXPECTED_ATTRIBUTE_TYPE,
                message=(
                    f"{words} was read as a value of '{adj.field}'; "
                    "avoid the corresponding words in the query."
                ),
                spans=list(implicit.spans),
            )
        ]

    if kind == "ChangeAggregate":
        previous = before.encodings.get(adj.channel)
        if previous is None or previous.aggregate == adj.agg_fn:
            return []
        words = lexicon.AGGREGATE_SUGGESTIONS.get(adj.agg_fn, [])
        if not words:
            return []
        quoted = " or ".join(f"'{w}'" for w in words)
        return [
            Hint(
                kind=UNEXPECTED_TASK_TYPE,
                message=f"To request this aggregation in a query, add a word like {quoted}.",
                suggestions=list(words),
            )
        ]

    if kind == "ModifyFilter":
        filters = after.filters
        if adj.index is None or not (0 <= adj.index < len(filters)):
            return []
        changed = filters[adj.index]
        temporal = dataset is not None and dataset.kind_of(changed.field) == TEMPORAL
        words = (
            lexicon.TEMPORAL_OPERATOR_SUGGESTIONS.get(changed.operator)
            if temporal
            else None
        ) or lexicon.OPERATOR_SUGGESTIONS.get(changed.operator, [])
        if not words:
            return []
        quoted = " and ".join(f"'{w}'" for w in words)
        return [
            Hint(
                kind=FILTER_REVISION,
                message=f"Supported phrases for '{changed.operator}' include {quoted}.",
                suggestions=list(words),
            )
        ]

    if kind == "ChangeMark":
        default = recommended_mark(after.encoded_kinds())
        if adj.mark == default:
            return []
        phrase = lexicon.MARK_REQUEST_PHRASES.get(adj.mark)
        if phrase:
            message = (
                f"To get a {adj.mark} chart directly, say '{phrase}' in the query."
            )
            suggestions = [phrase]
        else:
            message = f"A {adj.mark} chart cannot be requested through a query."
            suggestions = []
        return [
            Hint(kind=EXPLICIT_MARK_SUGGESTION, message=message, suggestions=suggestions)
        ]

    # SwapChannels, filter additions/removals, and ambiguity resolutions carry
    # no phrasing lesson.
    return []
