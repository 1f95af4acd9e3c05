"""Batch command-line front end: interpret, explain, hint, examples, serve.

stdout carries pretty-printed JSON with sorted keys (stable for golden files);
errors go to stderr as ``{"error": {"code", "message"}}``. Exit codes: 0 on
success, 1 on input errors, 2 on internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import interpreter as qi
from .chartspec import Adjustment, ChartSpec, parse_spec
from .data import Dataset, load_csv
from .errors import EmptyQuery, NoValidExample, XnliError
from .hints import interaction_hints, rule_based_hints
from .provenance import build_trace
from .query_examples import generate_examples
from .synthesize import apply_adjustment, synthesize


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def _fail(exc: XnliError) -> int:
    print(json.dumps(exc.to_json(), sort_keys=True), file=sys.stderr)
    return 1


def _load_dataset(path: str | None) -> Dataset:
    if not path:
        raise XnliError("--data is required for this command")
    blob = Path(path).read_bytes()
    return load_csv(blob, Path(path).stem)


def _load_spec(path: str, dataset: Dataset) -> ChartSpec:
    spec = parse_spec(json.loads(Path(path).read_text(encoding="utf-8")))
    # The data name in a hand-edited file is informational; the CLI always
    # executes against the dataset given on the command line.
    spec.data = dataset.id
    return spec


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("XNLI_SEED")
    return int(env) if env is not None else 0


def _empty_interpretation() -> qi.Interpretation:
    return qi.Interpretation(
        query="",
        attribute_refs=[],
        tasks=[],
        encoding_intent=qi.EncodingIntent(),
        unparsed_keywords=[],
    )


def _cmd_interpret(args) -> int:
    if not args.query or not args.query.strip():
        return _fail(EmptyQuery("query is empty"))
    dataset = _load_dataset(args.data)
    interp = qi.interpret(args.query, dataset)
    _emit(interp.to_json())
    return 0


def _cmd_explain(args) -> int:
    if not args.query or not args.query.strip():
        return _fail(EmptyQuery("query is empty"))
    dataset = _load_dataset(args.data)
    interp = qi.interpret(args.query, dataset)
    spec = synthesize(interp, dataset)
    trace = build_trace(spec, dataset)
    hints = rule_based_hints(args.query, interp, trace, dataset, spec)
    _emit(
        {
            "interp": interp.to_json(),
            "spec": spec.to_json(),
            "trace": trace.to_json(),
            "hints": [h.to_json() for h in hints],
        }
    )
    return 0


def _cmd_hint(args) -> int:
    dataset = _load_dataset(args.data)
    if args.query:
        interp = qi.interpret(args.query, dataset)
        before = _load_spec(args.spec, dataset) if args.spec else synthesize(interp, dataset)
    elif args.spec:
        interp = _empty_interpretation()
        before = _load_spec(args.spec, dataset)
    else:
        raise XnliError("hint needs --spec or --query to establish the current chart")
    adjustment = Adjustment.from_json(json.loads(args.adjust))
    seed = _default_seed(args.seed)
    after = apply_adjustment(before, adjustment, dataset, interp)
    hints = interaction_hints(before, adjustment, after, interp, dataset, seed)
    _emit(
        {
            "spec": after.to_json(),
            "hints": [h.to_json() for h in hints],
        }
    )
    return 0


def _cmd_examples(args) -> int:
    dataset = _load_dataset(args.data)
    target = _load_spec(args.spec, dataset)
    seed = _default_seed(args.seed)
    try:
        valid, recommended = generate_examples(target, dataset, seed)
        payload = {
            "examples": [{"text": e.text} for e in valid],
            "recommended": {"text": recommended.text},
        }
    except NoValidExample:
        payload = {"examples": [], "recommended": None}
    _emit(payload)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(port=args.port, data_dir=args.data_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xnli", description="Explainable NL-to-visualization engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interpret", help="parse a query into attributes/tasks/encoding")
    p.add_argument("--data", help="CSV file")
    p.add_argument("--query", required=True)
    p.set_defaults(func=_cmd_interpret)

    p = sub.add_parser("explain", help="full pipeline: interpretation, spec, trace, hints")
    p.add_argument("--data", help="CSV file")
    p.add_argument("--query", required=True)
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("hint", help="interaction hints for a widget adjustment")
    p.add_argument("--data", help="CSV file")
    p.add_argument("--spec", help="chart spec JSON file (defaults to the query's spec)")
    p.add_argument("--query", help="query used to establish the interpretation")
    p.add_argument("--adjust", required=True, help="adjustment JSON")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_hint)

    p = sub.add_parser("examples", help="validated query examples for a chart spec")
    p.add_argument("--data", help="CSV file")
    p.add_argument("--spec", required=True, help="chart spec JSON file")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_examples)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--data-dir", default="xnli-data")
    p.set_defaults(func=_cmd_serve)

    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except XnliError as exc:
        return _fail(exc)
    except FileNotFoundError as exc:
        return _fail(XnliError(f"file not found: {exc.filename}"))
    except json.JSONDecodeError as exc:
        return _fail(XnliError(f"invalid JSON input: {exc}"))
    except Exception as exc:  # pragma: no cover
        print(
            json.dumps({"error": {"code": "Internal", "message": str(exc)}}),
            file=sys.stderr,
        )
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
