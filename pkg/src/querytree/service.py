"""HTTP service for live adaptive identification sessions.

A session walks the greedy policy one answer at a time: the service
narrows the candidate set by each response, renormalizes the prior over
the survivors, and picks the next query lazily via ``next_query`` (the
full tree is never materialized).  Sessions live in memory and are
evicted after an idle timeout; registered instances can persist as JSON
files in a data directory.

API (JSON over HTTP):
    POST   /instances                 register an instance document
    GET    /instances                 list registered instances
    POST   /sessions                  {"instance_id": ..., "config": {...}}
    GET    /sessions/{id}
    POST   /sessions/{id}/answers     {"bit": 0|1, "query": optional tag}
    DELETE /sessions/{id}

Errors use status 400/404/409 with a JSON body {"error": reason}.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import InconsistentAnswersError, NotIdentifiableError, QueryTreeError
from .greedy import BuilderConfig, Identified, next_query
from .instance import ProblemInstance, check_identifiability, validate_instance
from .io import config_from_json, config_to_json, instance_from_json, instance_to_json

DEFAULT_IDLE_TTL = 3600.0


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


@dataclass
class Session:
    """Mutable per-session record; all mutation happens under ``lock``."""

    id: str
    instance_id: str
    instance: ProblemInstance
    config: BuilderConfig
    remaining: tuple[int, ...]
    history: list[tuple[int, int]] = field(default_factory=list)
    status: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_touched: float = field(default_factory=time.monotonic)

    def advance(self) -> None:
        """Recompute status from the remaining set via the greedy policy."""
        asked = [q for q, _ in self.history]
        try:
            step = next_query(self.instance, self.remaining, asked, self.config)
        except InconsistentAnswersError:
            self.status = {"state": "failed", "reason": "inconsistent answers"}
            return
        except NotIdentifiableError as exc:
            self.status = {"state": "failed", "reason": str(exc)}
            return
        if isinstance(step, Identified):
            name = (
                self.instance.object_name(step.index)
                if step.kind == "object"
                else self.instance.group_display(step.index)
            )
            self.status = {
                "state": "identified",
                "kind": step.kind,
                "index": step.index,
                "name": name,
            }
        else:
            self.status = {
                "state": "awaiting-answer",
                "query": step,
                "query_name": self.instance.query_name(step),
            }

    def posterior(self) -> list[float]:
        masses = np.asarray([self.instance.prior[i] for i in self.remaining])
        total = masses.sum()
        if total <= 0:  # all surviving objects had zero prior; report them evenly
            return [1.0 / len(self.remaining)] * len(self.remaining)
        return [float(x) for x in masses / total]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "instance_id": self.instance_id,
            "config": config_to_json(self.config),
            "remaining": list(self.remaining),
            "remaining_names": [self.instance.object_name(i) for i in self.remaining],
            "posterior": self.posterior(),
            "history": [
                {"query": q, "query_name": self.instance.query_name(q), "bit": b}
                for q, b in self.history
            ],
            "questions_asked": len(self.history),
            "status": dict(self.status),
        }


class Registry:
    """In-memory instance and session store with idle session eviction."""

    def __init__(self, data_dir: str | Path | None = None, idle_ttl: float = DEFAULT_IDLE_TTL):
        self.instances: dict[str, ProblemInstance] = {}
        self.sessions: dict[str, Session] = {}
        self.idle_ttl = idle_ttl
        self.data_dir = Path(data_dir) if data_dir else None
        self._lock = threading.Lock()
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.data_dir.glob("*.json")):
                self.instances[path.stem] = instance_from_json(json.loads(path.read_text()))

    def evict_idle(self) -> None:
        cutoff = time.monotonic() - self.idle_ttl
        with self._lock:
            stale = [sid for sid, s in self.sessions.items() if s.last_touched < cutoff]
            for sid in stale:
                del self.sessions[sid]

    def register_instance(self, doc: dict) -> str:
        instance = instance_from_json(doc)
        violations = validate_instance(instance)
        if violations:
            raise ServiceError(400, "invalid instance: " + "; ".join(violations))
        canonical = json.dumps(instance_to_json(instance), sort_keys=True, separators=(",", ":"))
        instance_id = hashlib.sha256(canonical.encode()).hexdigest()[:16]
        with self._lock:
            self.instances[instance_id] = instance
        if self.data_dir:
            (self.data_dir / f"{instance_id}.json").write_text(canonical)
        return instance_id

    def get_instance(self, instance_id: str) -> ProblemInstance:
        try:
            return self.instances[instance_id]
        except KeyError:
            raise ServiceError(404, f"unknown instance {instance_id!r}") from None

    def create_session(self, instance_id: str, config: BuilderConfig) -> Session:
        instance = self.get_instance(instance_id)
        witness = check_identifiability(instance, config.mode)
        if witness is not None:
            i, j = witness
            raise ServiceError(
                400,
                f"instance is not identifiable in {config.mode} mode: objects "
                f"{instance.object_name(i)!r} and {instance.object_name(j)!r} share all responses",
            )
        session = Session(
            id=uuid.uuid4().hex,
            instance_id=instance_id,
            instance=instance,
            config=config,
            remaining=tuple(range(instance.num_objects)),
        )
        session.advance()
        with self._lock:
            self.sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        try:
            session = self.sessions[session_id]
        except KeyError:
            raise ServiceError(404, f"unknown session {session_id!r}") from None
        session.last_touched = time.monotonic()
        return session

    def drop_session(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self.sessions:
                raise ServiceError(404, f"unknown session {session_id!r}")
            del self.sessions[session_id]


class CreateSessionBody(BaseModel):
    instance_id: str
    config: dict = {}


class AnswerBody(BaseModel):
    bit: int
    query: int | None = None  # optional tag of the question being answered


def create_app(
    data_dir: str | Path | None = None,
    cors_origin: str | None = None,
    idle_ttl: float = DEFAULT_IDLE_TTL,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="querytree session service")
    registry = Registry(data_dir=data_dir, idle_ttl=idle_ttl)
    app.state.registry = registry

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(QueryTreeError)
    async def domain_error(request: Request, exc: QueryTreeError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/instances")
    def register_instance(doc: dict):
        registry.evict_idle()
        instance_id = registry.register_instance(doc)
        instance = registry.get_instance(instance_id)
        return {
            "id": instance_id,
            "objects": instance.num_objects,
            "queries": instance.num_queries,
            "groups": instance.num_groups if instance.labels else None,
        }

    @app.get("/instances")
    def list_instances():
        registry.evict_idle()
        return [
            {
                "id": iid,
                "objects": inst.num_objects,
                "queries": inst.num_queries,
                "groups": inst.num_groups if inst.labels else None,
            }
            for iid, inst in sorted(registry.instances.items())
        ]

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        registry.evict_idle()
        config = config_from_json(body.config)
        session = registry.create_session(body.instance_id, config)
        return session.to_json()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = registry.get_session(session_id)
        with session.lock:
            return session.to_json()

    @app.post("/sessions/{session_id}/answers")
    def submit_answer(session_id: str, body: AnswerBody):
        registry.evict_idle()
        if body.bit not in (0, 1):
            raise ServiceError(400, f"bit must be 0 or 1, got {body.bit}")
        session = registry.get_session(session_id)
        with session.lock:
            state = session.status.get("state")
            if state != "awaiting-answer":
                # Idempotent retry: re-answering the question just consumed,
                # with the same bit, returns the current state unchanged.
                if (
                    body.query is not None
                    and session.history
                    and session.history[-1] == (body.query, body.bit)
                ):
                    return session.to_json()
                raise ServiceError(409, f"session is not awaiting an answer (state {state!r})")
            pending = session.status["query"]
            if body.query is not None and body.query != pending:
                if session.history and session.history[-1] == (body.query, body.bit):
                    return session.to_json()
                raise ServiceError(
                    409, f"answer targets query {body.query} but query {pending} is pending"
                )
            col = session.instance.responses[:, pending]
            session.remaining = tuple(i for i in session.remaining if col[i] == body.bit)
            session.history.append((pending, body.bit))
            if session.remaining:
                session.advance()
            else:
                session.status = {"state": "failed", "reason": "inconsistent answers"}
            return session.to_json()

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        registry.drop_session(session_id)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
