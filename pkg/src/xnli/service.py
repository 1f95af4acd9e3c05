"""HTTP session service: datasets, query pipeline, adjustments, and logs.

One session serializes its mutations behind a non-blocking lock (concurrent
requests get 409 Busy). Sessions and uploaded datasets are persisted as plain
files under the data directory, and every response-bearing request appends
exactly one log entry carrying the request, the response, and the seed used,
so a logged session can be replayed byte-identically.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request, Response, UploadFile

from . import interpreter as qi
from .chartspec import Adjustment, ChartSpec, parse_spec
from .data import Dataset, load_csv
from .errors import Busy, NoCurrentSpec, NoValidExample, XnliError
from .hints import interaction_hints, rule_based_hints
from .provenance import build_trace
from .query_examples import generate_examples
from .synthesize import apply_adjustment, synthesize

SEED_ENV = "XNLI_SEED"

_STATUS = {
    "EmptyQuery": 400,
    "NotANumber": 400,
    "MalformedCsv": 400,
    "EmptyDataset": 400,
    "DuplicateHeader": 400,
    "UnknownAttribute": 400,
    "InvalidAdjustment": 400,
    "InvalidSpec": 400,
    "Unencodable": 422,
    "SpecDatasetMismatch": 422,
    "NoCurrentSpec": 409,
    "Busy": 409,
    "NotFound": 404,
}


class NotFound(XnliError):
    code = "NotFound"


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload), status_code=status, media_type="application/json"
    )


def _error_response(exc: XnliError) -> Response:
    status = _STATUS.get(exc.code, 500)
    return _json_response(exc.to_json(), status)


def derive_seed(session_id: str, log_length: int) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        return int(env)
    digest = hashlib.sha256(f"{session_id}:{log_length}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class Session:
    id: str
    dataset_id: str
    prefs: qi.PreferenceStore = field(default_factory=qi.PreferenceStore)
    log: list[dict] = field(default_factory=list)
    pending_ambiguities: dict[str, str] = field(default_factory=dict)
    current_query: str | None = None
    current_interp: qi.Interpretation | None = None
    current_spec: ChartSpec | None = None
    prefs_at_query: dict[str, str] = field(default_factory=dict)
    last_timestamp: float = 0.0

    def stamp(self) -> float:
        now = time.time()
        if now <= self.last_timestamp:
            now = self.last_timestamp + 1e-6
        self.last_timestamp = now
        return now

    def append_log(self, kind: str, payload: dict) -> None:
        self.log.append({"timestamp": self.stamp(), "kind": kind, "payload": payload})

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "datasetId": self.dataset_id,
            "prefs": self.prefs.to_json(),
            "pendingAmbiguities": dict(self.pending_ambiguities),
            "currentQuery": self.current_query,
            "currentSpec": self.current_spec.to_json() if self.current_spec else None,
            "prefsAtQuery": dict(self.prefs_at_query),
            "log": self.log,
        }

    @classmethod
    def from_json(cls, payload: dict, dataset: Dataset) -> "Session":
        session = cls(
            id=payload["id"],
            dataset_id=payload["datasetId"],
            prefs=qi.PreferenceStore.from_json(payload.get("prefs", {})),
            log=list(payload.get("log", [])),
            pending_ambiguities=dict(payload.get("pendingAmbiguities", {})),
            current_query=payload.get("currentQuery"),
            prefs_at_query=dict(payload.get("prefsAtQuery", {})),
        )
        if session.log:
            session.last_timestamp = max(e["timestamp"] for e in session.log)
        if payload.get("currentSpec"):
            session.current_spec = parse_spec(payload["currentSpec"])
        if session.current_query:
            session.current_interp = qi.interpret(
                session.current_query,
                dataset,
                qi.PreferenceStore.from_json(session.prefs_at_query),
            )
        return session


class Engine:
    """Shared state behind the endpoints: datasets, sessions, persistence."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        (self.data_dir / "datasets").mkdir(parents=True, exist_ok=True)
        (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)
        self.datasets: dict[str, Dataset] = {}
        self.sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._load_bundled()
        self._load_persisted()

    def _load_bundled(self) -> None:
        source = resources.files("xnli").joinpath("datasets/movies.csv")
        dataset = load_csv(source.read_bytes(), "movies")
        self.datasets[dataset.id] = dataset

    def _load_persisted(self) -> None:
        for path in sorted((self.data_dir / "datasets").glob("*.csv")):
            dataset = load_csv(path.read_bytes(), path.stem.split("__", 1)[-1])
            self.datasets[dataset.id] = dataset
        for path in sorted((self.data_dir / "sessions").glob("*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            dataset = self.datasets.get(payload.get("datasetId"))
            if dataset is None:
                continue
            session = Session.from_json(payload, dataset)
            self.sessions[session.id] = session

    def add_dataset(self, blob: bytes, name: str) -> Dataset:
        dataset = load_csv(blob, name)
        self.datasets[dataset.id] = dataset
        path = self.data_dir / "datasets" / f"{dataset.id}__{name}.csv"
        path.write_bytes(blob)
        return dataset

    def dataset(self, dataset_id: str) -> Dataset:
        if dataset_id not in self.datasets:
            raise NotFound(f"unknown dataset: {dataset_id}")
        return self.datasets[dataset_id]

    def create_session(self, dataset_id: str) -> Session:
        self.dataset(dataset_id)
        session = Session(id=uuid.uuid4().hex, dataset_id=dataset_id)
        self.sessions[session.id] = session
        self.save_session(session)
        return session

    def session(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            raise NotFound(f"unknown session: {session_id}")
        return self.sessions[session_id]

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def save_session(self, session: Session) -> None:
        path = self.data_dir / "sessions" / f"{session.id}.json"
        path.write_text(canonical_json(session.to_json()), encoding="utf-8")

    # -- pipeline ---------------------------------------------------------

    def run_query(self, session: Session, query: str) -> dict:
        dataset = self.dataset(session.dataset_id)

        # Implicit agreement: an ambiguity shown and not resolved before the
        # next query pins the displayed default.
        for token, attribute in session.pending_ambiguities.items():
            if token not in session.prefs:
                session.prefs.set(token, attribute)
                session.append_log(
                    "AmbiguityResolved",
                    {"token": token, "attribute": attribute, "mode": "implicit"},
                )
        session.pending_ambiguities = {}

        interp = qi.interpret(query, dataset, session.prefs)
        spec = synthesize(interp, dataset)
        trace = build_trace(spec, dataset)
        hints = rule_based_hints(query, interp, trace, dataset, spec)
        response = {
            "interp": interp.to_json(),
            "spec": spec.to_json(),
            "trace": trace.to_json(),
            "hints": [h.to_json() for h in hints],
        }

        session.current_query = query
        session.current_interp = interp
        session.current_spec = spec
        session.prefs_at_query = session.prefs.to_json()
        for ref in interp.attribute_refs:
            if ref.inference == qi.AMBIGUOUS and ref.spans:
                token = ref.spans[0].text(query).lower()
                if token not in session.prefs:
                    session.pending_ambiguities[token] = ref.attribute
        session.append_log("Query", {"request": {"query": query}, "response": response})
        if hints:
            session.append_log("HintShown", {"kinds": [h.kind for h in hints]})
        self.save_session(session)
        return response

    def run_adjustment(self, session: Session, payload: dict, seed: int | None = None) -> dict:
        dataset = self.dataset(session.dataset_id)
        if session.current_spec is None or session.current_interp is None:
            raise NoCurrentSpec("post a query before adjusting")
        adjustment = Adjustment.from_json(payload)
        if seed is None:
            seed = derive_seed(session.id, len(session.log))

        before = session.current_spec
        after = apply_adjustment(before, adjustment, dataset, session.current_interp)
        trace = build_trace(after, dataset)
        hints = interaction_hints(
            before, adjustment, after, session.current_interp, dataset, seed
        )
        try:
            valid, recommended = generate_examples(after, dataset, seed)
            examples = {
                "valid": [{"text": e.text} for e in valid],
                "recommended": {"text": recommended.text},
            }
        except NoValidExample:
            examples = {"valid": [], "recommended": None}

        response = {
            "spec": after.to_json(),
            "trace": trace.to_json(),
            "hints": [h.to_json() for h in hints],
            "examples": examples,
        }

        session.current_spec = after
        if adjustment.kind == "ResolveAmbiguity":
            session.prefs.set(adjustment.token, adjustment.field)
            session.pending_ambiguities.pop(adjustment.token.lower(), None)
            for ref in session.current_interp.attribute_refs:
                if ref.inference == qi.AMBIGUOUS and adjustment.field in ref.candidates:
                    for span in ref.spans:
                        if span.text(session.current_query).lower() == adjustment.token.lower():
                            ref.attribute = adjustment.field
            session.append_log(
                "AmbiguityResolved",
                {"token": adjustment.token, "attribute": adjustment.field, "mode": "explicit"},
            )
        session.append_log(
            "Adjustment",
            {"request": {"adjustment": payload}, "seed": seed, "response": response},
        )
        if hints:
            session.append_log("HintShown", {"kinds": [h.kind for h in hints]})
        self.save_session(session)
        return response


def replay_session(engine: Engine, session_id: str) -> list[tuple[str, str]]:
    """Re-run a session's logged requests on a fresh session.

    Returns (expected, actual) canonical response pairs in log order; the
    replay is byte-identical when every pair matches.
    """
    original = engine.session(session_id)
    fresh = Session(id=f"replay-{original.id}", dataset_id=original.dataset_id)
    pairs: list[tuple[str, str]] = []
    for entry in original.log:
        if entry["kind"] == "Query":
            actual = engine.run_query(fresh, entry["payload"]["request"]["query"])
        elif entry["kind"] == "Adjustment":
            actual = engine.run_adjustment(
                fresh,
                entry["payload"]["request"]["adjustment"],
                seed=entry["payload"]["seed"],
            )
        else:
            continue
        pairs.append(
            (canonical_json(entry["payload"]["response"]), canonical_json(actual))
        )
    engine.sessions.pop(fresh.id, None)
    (engine.data_dir / "sessions" / f"{fresh.id}.json").unlink(missing_ok=True)
    return pairs


def create_app(data_dir: str | Path | None = None) -> FastAPI:
    engine = Engine(Path(data_dir) if data_dir else Path("xnli-data"))
    app = FastAPI(title="xnli", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(XnliError)
    def _handle(request: Request, exc: XnliError) -> Response:  # pragma: no cover
        return _error_response(exc)

    @app.get("/datasets")
    def list_datasets() -> Response:
        return _json_response(
            {
                "datasets": [
                    {"id": d.id, "name": d.name, "rowCount": d.row_count}
                    for d in engine.datasets.values()
                ]
            }
        )

    @app.post("/datasets")
    def upload_dataset(file: UploadFile, name: str | None = None) -> Response:
        blob = file.file.read()
        label = name or Path(file.filename or "dataset.csv").stem
        try:
            dataset = engine.add_dataset(blob, label)
        except XnliError as exc:
            return _error_response(exc)
        return _json_response(
            {"datasetId": dataset.id, "overview": dataset.overview_json()}, status=201
        )

    @app.get("/datasets/{dataset_id}/overview")
    def dataset_overview(dataset_id: str) -> Response:
        try:
            dataset = engine.dataset(dataset_id)
        except XnliError as exc:
            return _error_response(exc)
        return _json_response(dataset.overview_json())

    @app.get("/datasets/{dataset_id}/rows")
    def dataset_rows(dataset_id: str) -> Response:
        try:
            dataset = engine.dataset(dataset_id)
        except XnliError as exc:
            return _error_response(exc)
        return _json_response({"rows": dataset.rows})

    @app.post("/sessions")
    def create_session(body: dict) -> Response:
        try:
            session = engine.create_session(body.get("datasetId", ""))
        except XnliError as exc:
            return _error_response(exc)
        return _json_response(
            {"sessionId": session.id, "datasetId": session.dataset_id}, status=201
        )

    @app.post("/sessions/{session_id}/query")
    def post_query(session_id: str, body: dict) -> Response:
        try:
            session = engine.session(session_id)
        except XnliError as exc:
            return _error_response(exc)
        lock = engine.lock_for(session_id)
        if not lock.acquire(blocking=False):
            return _error_response(Busy("another request is in flight for this session"))
        try:
            response = engine.run_query(session, body.get("query", ""))
        except XnliError as exc:
            return _error_response(exc)
        finally:
            lock.release()
        return _json_response(response)

    @app.post("/sessions/{session_id}/adjust")
    def post_adjust(session_id: str, body: dict) -> Response:
        try:
            session = engine.session(session_id)
        except XnliError as exc:
            return _error_response(exc)
        lock = engine.lock_for(session_id)
        if not lock.acquire(blocking=False):
            return _error_response(Busy("another request is in flight for this session"))
        try:
            response = engine.run_adjustment(
                session, body.get("adjustment", {}), seed=body.get("seed")
            )
        except XnliError as exc:
            return _error_response(exc)
        finally:
            lock.release()
        return _json_response(response)

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str) -> Response:
        try:
            session = engine.session(session_id)
        except XnliError as exc:
            return _error_response(exc)
        return _json_response({"entries": session.log})

    return app


def serve(port: int = 8080, data_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir), host="0.0.0.0", port=port)
