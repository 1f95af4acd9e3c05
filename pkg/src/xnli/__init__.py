"""Explainable natural-language-to-visualization engine.

Pipeline: ``load_csv`` -> ``interpret`` -> ``synthesize`` -> ``build_trace``
-> ``rule_based_hints``, with widget adjustments via ``apply_adjustment`` and
``interaction_hints``, and template-based query examples via
``generate_examples``. ``xnli.service`` serves the pipeline over HTTP and
``xnli.cli`` wraps it for scripting.
"""

from .chartspec import Adjustment, BinT, ChartSpec, Encoding, FilterT, parse_spec, specs_equal
from .data import AttributeMeta, Dataset, infer_attribute_kind, load_csv, typical_values
from .errors import XnliError
from .hints import Hint, interaction_hints, rule_based_hints
from .interpreter import (
    AttributeRef,
    EncodingIntent,
    Interpretation,
    PreferenceStore,
    Span,
    TaskRef,
    interpret,
    parse_numeric_literal,
    tokenize,
)
from .provenance import (
    ProvenanceTrace,
    annotate_cues,
    build_trace,
    extract_group_aggregate,
    select_key_attribute,
    select_sample,
)
from .query_examples import QueryExample, generate_examples
from .synthesize import apply_adjustment, synthesize

__version__ = "0.1.0"

__all__ = [
    "Adjustment",
    "AttributeMeta",
    "AttributeRef",
    "BinT",
    "ChartSpec",
    "Dataset",
    "Encoding",
    "EncodingIntent",
    "FilterT",
    "Hint",
    "Interpretation",
    "PreferenceStore",
    "ProvenanceTrace",
    "QueryExample",
    "Span",
    "TaskRef",
    "XnliError",
    "annotate_cues",
    "apply_adjustment",
    "build_trace",
    "extract_group_aggregate",
    "generate_examples",
    "infer_attribute_kind",
    "interaction_hints",
    "interpret",
    "load_csv",
    "parse_numeric_literal",
    "parse_spec",
    "rule_based_hints",
    "select_key_attribute",
    "select_sample",
    "specs_equal",
    "synthesize",
    "tokenize",
    "typical_values",
]
