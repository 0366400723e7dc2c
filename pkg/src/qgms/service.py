"""HTTP/JSON front end for blind sessions.

Each session lives in its own directory under ``data_dir``:

    <session_id>/state.json      cursor / state snapshot + commitment
    <session_id>/series.json     original series (full-precision floats)
    <session_id>/manifest.json   sealed identity record (operator-side)
    <session_id>/ledger.jsonl    hash-chained predictions, one per line

Every mutation is persisted (write + fsync) before the response goes out,
and reveal verifies the *persisted* artifacts, so on-disk tampering
between commitment and reveal is reported.  Reveal is idempotent.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import blind
from .blind import BlindSession, SessionState
from .errors import (
    EmptySeries,
    LookaheadRejected,
    QgmsError,
    SessionRevealed,
    SessionSealed,
    SessionStateError,
)
from .market_data import Bar, PriceSeries, load_csv_file, parse_rfc3339
from .metrics import EvaluationConfig, evaluate_predictions, predictions_from_ledger


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _not_found(session_id: str) -> ApiError:
    return ApiError(404, "NOT_FOUND", f"no session {session_id}")


class SessionRecordStore:
    """Sessions plus their on-disk persistence, keyed by session id."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.sessions: dict = {}
        self.locks: dict = {}
        self.reveals: dict = {}
        self._registry_lock = threading.Lock()
        self._load_existing()

    def _dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def ledger_path(self, session_id: str) -> Path:
        return self._dir(session_id) / "ledger.jsonl"

    def manifest_path(self, session_id: str) -> Path:
        return self._dir(session_id) / "manifest.json"

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self.locks:
                self.locks[session_id] = threading.Lock()
            return self.locks[session_id]

    def get(self, session_id: str) -> BlindSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise _not_found(session_id) from None

    def add(self, session: BlindSession) -> None:
        d = self._dir(session.session_id)
        d.mkdir(parents=True, exist_ok=True)
        _write_atomic(d / "series.json", json.dumps(session._original.to_exact_dict()))
        blind.write_manifest(self.manifest_path(session.session_id), session._manifest)
        self.ledger_path(session.session_id).touch()
        self.sessions[session.session_id] = session
        self.persist_state(session)

    def persist_state(self, session: BlindSession) -> None:
        state = {
            "session_id": session.session_id,
            "state": session.state.value,
            "cursor": session.cursor,
            "seed": session._manifest.rng_seed,
            "commitment": session.commitment,
        }
        _write_atomic(self._dir(session.session_id) / "state.json", json.dumps(state))

    def append_ledger_entry(self, session_id: str, entry) -> None:
        path = self.ledger_path(session_id)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(blind.entry_line(entry) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _load_existing(self) -> None:
        for state_file in sorted(self.data_dir.glob("*/state.json")):
            try:
                state = json.loads(state_file.read_text(encoding="utf-8"))
                series = _series_from_dict(
                    json.loads((state_file.parent / "series.json").read_text(encoding="utf-8"))
                )
                session = BlindSession(series, int(state["seed"]),
                                       session_id=state["session_id"])
                session.state = SessionState(state["state"])
                session.cursor = int(state["cursor"])
                ledger_file = state_file.parent / "ledger.jsonl"
                if ledger_file.exists():
                    session.ledger = blind.CommitmentLedger(blind.read_ledger(ledger_file))
                self.sessions[session.session_id] = session
            except (QgmsError, OSError, ValueError, KeyError):
                continue  # skip unreadable session dirs rather than refuse to start


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _series_from_dict(data: dict) -> PriceSeries:
    bars = [
        Bar(
            timestamp=parse_rfc3339(row["timestamp"]),
            open=row["open"],
            high=row["high"],
            low=row["low"],
            close=row["close"],
            volume=row.get("volume"),
        )
        for row in data["bars"]
    ]
    return PriceSeries(symbol=data["symbol"], timeframe=data["timeframe"], bars=tuple(bars))


def _series_from_request(body: dict) -> PriceSeries:
    csv_path = body.get("csv_path")
    inline = body.get("inline_bars")
    if csv_path is None and inline is None:
        raise ApiError(400, "BAD_REQUEST", "provide csv_path or inline_bars")
    if csv_path is not None:
        try:
            return load_csv_file(csv_path, symbol=body.get("symbol"),
                                 timeframe=body.get("timeframe"))
        except OSError as exc:
            raise ApiError(400, "BAD_REQUEST", f"cannot read {csv_path}: {exc}") from None
    return _series_from_dict(
        {
            "symbol": body.get("symbol", "UNKNOWN"),
            "timeframe": body.get("timeframe", "1D"),
            "bars": inline,
        }
    )


def create_app(data_dir, clock=None) -> FastAPI:
    app = FastAPI(title="qgms blind session service")
    # the analyst console is served from another origin (file:// or a dev server)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionRecordStore(Path(data_dir))
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    def _translate(exc: QgmsError) -> ApiError:
        if isinstance(exc, LookaheadRejected):
            return ApiError(409, "LOOKAHEAD_REJECTED", str(exc))
        if isinstance(exc, SessionSealed):
            return ApiError(409, "SESSION_SEALED", str(exc))
        if isinstance(exc, SessionRevealed):
            return ApiError(409, "SESSION_REVEALED", str(exc))
        if isinstance(exc, SessionStateError):
            return ApiError(409, "SESSION_STATE", str(exc))
        if isinstance(exc, EmptySeries):
            return ApiError(400, "EMPTY_SERIES", str(exc))
        return ApiError(400, "BAD_REQUEST", str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(store.sessions)}

    @app.post("/sessions", status_code=201)
    async def create_session_endpoint(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "seed" not in body:
            raise ApiError(400, "BAD_REQUEST", "body must include a seed")
        try:
            series = _series_from_request(body)
            session = BlindSession(series, int(body["seed"]), clock=clock)
        except QgmsError as exc:
            raise _translate(exc) from None
        with store.lock(session.session_id):
            store.add(session)
        return {"session_id": session.session_id, "commitment": session.commitment}

    @app.get("/sessions/{session_id}/bars/next")
    def next_bar(session_id: str):
        session = store.get(session_id)
        with store.lock(session_id):
            try:
                served = session.next_bar()
            except QgmsError as exc:
                raise _translate(exc) from None
            store.persist_state(session)
        if served is None:
            return Response(status_code=204)
        return served.to_dict()

    @app.post("/sessions/{session_id}/predictions", status_code=201)
    async def submit_prediction(session_id: str, request: Request):
        body = await request.json()
        session = store.get(session_id)
        for field in ("bar_index", "expected_direction"):
            if field not in body:
                raise ApiError(400, "BAD_REQUEST", f"missing field {field}")
        with store.lock(session_id):
            try:
                entry = session.submit_prediction(
                    int(body["bar_index"]),
                    body["expected_direction"],
                    note=str(body.get("note", "")),
                )
            except (QgmsError, ValueError) as exc:
                if isinstance(exc, ValueError):
                    raise ApiError(400, "BAD_REQUEST", str(exc)) from None
                raise _translate(exc) from None
            store.append_ledger_entry(session_id, entry)
            store.persist_state(session)
        return {"entry_hash": entry.hash, "chain_length": len(session.ledger.entries)}

    @app.post("/sessions/{session_id}/seal")
    def seal(session_id: str):
        session = store.get(session_id)
        with store.lock(session_id):
            try:
                session.seal()
            except QgmsError as exc:
                raise _translate(exc) from None
            store.persist_state(session)
        return {"session_id": session_id, "state": session.state.value}

    @app.post("/sessions/{session_id}/reveal")
    def reveal(session_id: str):
        session = store.get(session_id)
        with store.lock(session_id):
            if session_id in store.reveals:
                return store.reveals[session_id]
            try:
                session.seal_and_reveal()
            except QgmsError as exc:
                raise _translate(exc) from None
            # verify the persisted artifacts, not the in-memory copies; the
            # session knows how long the chain must be, so truncation counts
            report = blind.verify_ledger(
                store.ledger_path(session_id),
                store.manifest_path(session_id),
                session.commitment,
                expected_count=len(session.ledger.entries),
                expected_head=session.ledger.last_hash(),
            )
            store.persist_state(session)
            payload = {
                "manifest": session.manifest.to_dict(),
                "verification": report.to_dict(),
            }
            store.reveals[session_id] = payload
            return payload

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str, horizon: int = 50, atr: int = 14, k: float = 2.0):
        session = store.get(session_id)
        if session.state is not SessionState.REVEALED:
            raise ApiError(409, "SESSION_NOT_REVEALED",
                           "report is available after reveal only")
        entries = blind.read_ledger(store.ledger_path(session_id))
        config = EvaluationConfig(horizon_bars=horizon, atr_window=atr, hit_multiplier=k)
        result = evaluate_predictions(session.original_series,
                                      predictions_from_ledger(entries), config)
        return result.to_dict()

    return app


def serve(port: int = 8750, data_dir="blind_sessions", host: str = "127.0.0.1") -> None:
    """Run the service until interrupted (used by the CLI)."""
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port, log_level="info")
