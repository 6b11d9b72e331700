"""HTTP facade over the co-training review queue and round control.

State is event-sourced per target dimension: a snapshot file plus an
append-only event log of label submissions and round advances. Replaying
the log from the snapshot reproduces the live state exactly, because every
engine operation is deterministic. All writes funnel through one lock;
reads serve from the current in-memory state. Optimistic concurrency uses
per-item revision numbers so no label is lost or double-applied.
"""

from __future__ import annotations

import itertools
import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from . import cotrain
from .corpus import VideoRecord
from .textmeasure import Lexicon, extract_terms

__all__ = ["SessionStore", "create_app", "serve"]

SNAPSHOT_FORMAT = "vidcurate-session-snapshot v1"


class SessionStore:
    """Durable co-training sessions keyed by target dimension (MED/UND).

    ``state_dir`` holds ``snapshot-<dim>.json`` and ``events-<dim>.log``.
    New stores write an initial snapshot; reopened stores load the snapshot
    and replay any events appended after it.
    """

    def __init__(self, state_dir,
                 records: Optional[dict[str, VideoRecord]] = None,
                 lexicon: Optional[Lexicon] = None):
        self.state_dir = Path(state_dir)
        self.state_dir.mkdir(parents=True, exist_ok=True)
        self.records = records or {}
        self.lexicon = lexicon
        self.lock = threading.Lock()
        self.states: dict[str, cotrain.CoTrainState] = {}
        self.jobs: dict[str, dict] = {}
        self._job_counter = itertools.count(1)

    # -- persistence ---------------------------------------------------

    def _snapshot_path(self, dim: str) -> Path:
        return self.state_dir / f"snapshot-{dim}.json"

    def _events_path(self, dim: str) -> Path:
        return self.state_dir / f"events-{dim}.log"

    def init_dimension(self, dim: str, state: cotrain.CoTrainState) -> None:
        """Register a fresh session and write its base snapshot."""
        with self.lock:
            self.states[dim] = state
            self._write_snapshot(dim, event_count=0)
            self._events_path(dim).write_text("", encoding="utf-8")

    def _write_snapshot(self, dim: str, event_count: int) -> None:
        doc = {"format": SNAPSHOT_FORMAT, "event_count": event_count,
               "state": cotrain.state_to_json_dict(self.states[dim])}
        self._snapshot_path(dim).write_text(
            json.dumps(doc, sort_keys=True), encoding="utf-8")

    def _count_events(self, dim: str) -> int:
        path = self._events_path(dim)
        if not path.exists():
            return 0
        return sum(1 for line in path.read_text(encoding="utf-8").splitlines() if line)

    def load_dimension(self, dim: str) -> None:
        """Snapshot plus event-log replay; the crash-recovery path."""
        snap_path = self._snapshot_path(dim)
        if not snap_path.exists():
            raise FileNotFoundError(f"no snapshot for dimension {dim}: {snap_path}")
        doc = json.loads(snap_path.read_text(encoding="utf-8"))
        if doc.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"{snap_path}: unrecognized snapshot format")
        state = cotrain.state_from_json_dict(doc["state"])
        events_path = self._events_path(dim)
        events = []
        if events_path.exists():
            events = [json.loads(line) for line
                      in events_path.read_text(encoding="utf-8").splitlines() if line]
        for event in events[doc["event_count"]:]:
            state = self._apply_event(state, event)
        with self.lock:
            self.states[dim] = state

    def _append_event(self, dim: str, event: dict) -> None:
        with open(self._events_path(dim), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()

    @staticmethod
    def _apply_event(state: cotrain.CoTrainState, event: dict) -> cotrain.CoTrainState:
        if event["type"] == "submit":
            return cotrain.resolve_review(state, event["video_id"],
                                          event["label"], event["resolver"])
        if event["type"] == "advance":
            cotrain.select_pools(state)
            state, _ = cotrain.commit_round(state)
            return state
        raise ValueError(f"unknown event type {event['type']!r}")

    def snapshot_all(self) -> None:
        """Fold the event log into fresh snapshots (graceful-shutdown path)."""
        with self.lock:
            for dim in self.states:
                self._write_snapshot(dim, event_count=self._count_events(dim))

    # -- operations (single-writer; callers hold no lock) ---------------

    def _state(self, dim: str) -> cotrain.CoTrainState:
        if dim not in self.states:
            raise HTTPException(status_code=404, detail=f"unknown dimension {dim!r}")
        return self.states[dim]

    def queue_view(self, dim: str) -> list[dict]:
        with self.lock:
            state = self._state(dim)
            items = []
            for item in state.pending_items():
                rec = self.records.get(item.video_id)
                items.append({
                    "video_id": item.video_id,
                    "dimension": item.dimension,
                    "title": rec.title if rec else "",
                    "excerpt": (rec.description[:200] if rec else ""),
                    "f1_proba": item.f1_proba,
                    "f2_proba": item.f2_proba,
                    "created_round": item.created_round,
                    "revision": item.revision,
                })
            return items

    def submit_label(self, video_id: str, dim: str, label: str,
                     resolver: str, revision: int) -> dict:
        with self.lock:
            state = self._state(dim)
            item = state.find_item(video_id)
            if item is None:
                raise HTTPException(status_code=404,
                                    detail=f"no review item for {video_id!r}")
            if item.status == "resolved":
                if item.resolved_label == label:
                    return {"status": "noop", "revision": item.revision}
                raise HTTPException(
                    status_code=409,
                    detail=f"already resolved as {item.resolved_label}")
            if item.revision != revision:
                raise HTTPException(
                    status_code=409,
                    detail=f"stale revision {revision}, current {item.revision}")
            self._append_event(dim, {"type": "submit", "video_id": video_id,
                                     "label": label, "resolver": resolver})
            try:
                cotrain.resolve_review(state, video_id, label, resolver)
            except cotrain.CoTrainError as e:
                raise HTTPException(status_code=409, detail=str(e)) from e
            return {"status": "applied", "revision": item.revision}

    def advance_round(self, dim: str) -> str:
        with self.lock:
            state = self._state(dim)
            pending = [it.video_id for it in state.pending_items()]
            if pending:
                raise HTTPException(
                    status_code=409,
                    detail={"message": "pending review items", "pending": pending})
            job_id = f"job-{next(self._job_counter)}"
            self.jobs[job_id] = {"status": "running", "dimension": dim, "report": None}

        def work():
            try:
                with self.lock:
                    self._append_event(dim, {"type": "advance"})
                    cotrain.select_pools(self.states[dim])
                    new_state, report = cotrain.commit_round(self.states[dim])
                    self.states[dim] = new_state
                    self.jobs[job_id].update(status="done", report={
                        "round": report.round,
                        "n_auto_high": report.n_auto_high,
                        "n_auto_low": report.n_auto_low,
                        "n_review": report.n_review,
                        "n_waiting": report.n_waiting,
                        "n_low_confidence": report.n_low_confidence,
                        "entries": [{"video_id": e.video_id,
                                     "disposition": e.disposition,
                                     "f1_proba": e.f1_proba,
                                     "f2_proba": e.f2_proba}
                                    for e in report.entries],
                    })
            except Exception as e:   # noqa: BLE001 - job surface reports failures
                self.jobs[job_id].update(status="failed", error=str(e))

        threading.Thread(target=work, daemon=True).start()
        return job_id

    def stats(self, dim: str) -> dict:
        with self.lock:
            state = self._state(dim)
            stop, reason = cotrain.should_stop(state)
            return {
                "dimension": dim,
                "round": state.round,
                "labeled": len(state.labeled),
                "unlabeled": len(state.unlabeled),
                "queue_depth": len(state.pending_items()),
                "discarded": len(state.discarded),
                "history": [{"round": i, "macro_f1": r.macro_f1(),
                             "accuracy": r.accuracy, "auc": r.auc}
                            for i, r in enumerate(state.history)],
                "should_stop": stop,
                "stop_reason": reason,
            }

    def video_detail(self, video_id: str) -> dict:
        rec = self.records.get(video_id)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id!r}")
        hits = []
        if self.lexicon is not None and len(self.lexicon):
            hits = [{"span": list(h.char_span), "surface": h.surface,
                     "canonical": h.canonical, "semtype": h.semtype}
                    for h in extract_terms(rec.text, self.lexicon)]
        return {"metadata": rec.to_json_dict(), "term_hits": hits}


class LabelSubmission(BaseModel):
    video_id: str
    dimension: str
    label: str
    resolver: str
    revision: int


def create_app(store: SessionStore) -> FastAPI:
    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app):
        yield
        store.snapshot_all()

    app = FastAPI(title="vidcurate review service", lifespan=lifespan)
    app.state.store = store

    @app.get("/api/queue")
    def get_queue(dimension: str = Query(...)):
        return store.queue_view(dimension)

    @app.post("/api/labels")
    def post_label(body: LabelSubmission):
        if body.label not in ("high", "low"):
            raise HTTPException(status_code=422, detail="label must be high|low")
        return store.submit_label(body.video_id, body.dimension, body.label,
                                  body.resolver, body.revision)

    @app.post("/api/rounds/advance", status_code=202)
    def advance(dimension: str = Query(...)):
        job_id = store.advance_round(dimension)
        return {"job_id": job_id}

    @app.get("/api/rounds/status/{job_id}")
    def job_status(job_id: str):
        job = store.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job

    @app.get("/api/stats")
    def get_stats(dimension: str = Query(...)):
        return store.stats(dimension)

    @app.get("/api/videos/{video_id}")
    def get_video(video_id: str):
        return store.video_detail(video_id)

    return app


def serve(store: SessionStore, host: str = "127.0.0.1", port: int = 8321) -> None:
    """Run the review service until interrupted; snapshots on shutdown."""
    import uvicorn

    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
