"""HTTP session service for human or scripted learners.

Each session runs its turn loop on a worker thread; learner input arrives via
a queue-backed endpoint, so the loop blocks at exactly the points where a
human must reply (assessment questions, dialogue check-ins, task submissions).
Turn events stream over SSE with replay from any event id.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import uvicorn
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from starlette.datastructures import UploadFile

from .config import ServiceConfig, build_gateway, build_search_provider, load_config
from .domain import SessionConfig
from .errors import TutorError
from .gateway import Gateway
from .memory import MemoryStore, VectorMemory
from .orchestrator import TutorSession, replay_session
from .scripted import build_demo_script
from .search.materials import MaterialDigest, ingest_materials

WAIT_STEP_S = 0.02
REQUEST_WAIT_S = 30.0


class SessionSuspended(Exception):
    """Idle-timeout control signal; not a module error, so the turn loop
    lets it propagate instead of recording an aborted turn."""


class QueueEndpoint:
    """Blocks the session thread until the client posts the learner's input."""

    def __init__(self, cond: threading.Condition, idle_timeout_s: float):
        self.cond = cond
        self.idle_timeout_s = idle_timeout_s
        self.inbox: queue.Queue[str] = queue.Queue()
        self.awaiting: tuple[str, str] | None = None
        self.await_seq = 0

    def answer(self, kind: str, prompt: str) -> str:
        with self.cond:
            self.awaiting = (kind, prompt)
            self.await_seq += 1
            self.cond.notify_all()
        try:
            reply = self.inbox.get(timeout=self.idle_timeout_s)
        except queue.Empty:
            raise SessionSuspended(f"idle for {self.idle_timeout_s}s awaiting {kind}") from None
        with self.cond:
            self.awaiting = None
            self.cond.notify_all()
        return reply

    def absorb(self, content: str) -> None:  # humans read the lesson on screen
        pass


@dataclass
class ManagedSession:
    session: TutorSession
    endpoint: QueueEndpoint
    gateway: Gateway
    cond: threading.Condition
    jsonl_path: Path
    thread: threading.Thread | None = None
    status: str = "running"  # running | suspended | done | failed
    events: list[dict[str, Any]] = field(default_factory=list)
    detail: str = ""

    def push_event(self, event: str, data: dict[str, Any]) -> None:
        with self.cond:
            self.events.append({"id": len(self.events), "event": event, "data": data})
            self.cond.notify_all()


class SessionRegistry:
    def __init__(self, cfg: ServiceConfig):
        self.cfg = cfg
        self.sessions: dict[str, ManagedSession] = {}
        self._lock = threading.Lock()
        self._counter = 0
        store_root = Path(cfg.store_dir)
        (store_root / "sessions").mkdir(parents=True, exist_ok=True)
        gateway_probe = build_gateway(cfg, script=[])
        self.memory = VectorMemory(
            MemoryStore(store_root / "memory", dim=gateway_probe.embed_dim), gateway_probe
        )

    def new_id(self) -> str:
        with self._lock:
            self._counter += 1
            return f"s-{self._counter:04d}"

    def add(self, sid: str, managed: ManagedSession) -> None:
        with self._lock:
            self.sessions[sid] = managed

    def get(self, sid: str) -> ManagedSession:
        with self._lock:
            managed = self.sessions.get(sid)
        if managed is None:
            raise HTTPException(status_code=404, detail={"code": "not_found", "message": f"no session {sid}"})
        return managed


def _runner(managed: ManagedSession) -> None:
    try:
        managed.session.run_to_completion(managed.endpoint)
        status = "done"
    except SessionSuspended as exc:
        status = "suspended"
        managed.detail = str(exc)
    except Exception as exc:  # noqa: BLE001 - surfaced to the client as failed
        status = "failed"
        managed.detail = str(exc)
    with managed.cond:
        managed.status = status
        managed.cond.notify_all()
    managed.push_event("status", {"status": status, "detail": managed.detail})


def _start_thread(managed: ManagedSession) -> None:
    thread = threading.Thread(target=_runner, args=(managed,), daemon=True)
    managed.thread = thread
    thread.start()


def _wait_for_idle(managed: ManagedSession, after_seq: int, timeout_s: float = REQUEST_WAIT_S) -> None:
    deadline = timeout_s
    with managed.cond:
        managed.cond.wait_for(
            lambda: managed.status != "running"
            or (managed.endpoint.awaiting is not None and managed.endpoint.await_seq > after_seq),
            timeout=deadline,
        )


def _pending_of(managed: ManagedSession) -> dict[str, Any]:
    with managed.cond:
        status = managed.status
        awaiting = managed.endpoint.awaiting
    if status == "done":
        return {"kind": "done"}
    if status == "failed":
        return {"kind": "failed", "message": managed.detail}
    if status == "suspended":
        return {"kind": "suspended"}
    if awaiting is None:
        return {"kind": "working"}
    kind, prompt = awaiting
    pending: dict[str, Any] = {"kind": kind, "prompt": prompt}
    task = managed.session.current_task
    if kind == "task" and task is not None:
        pending["task_id"] = task.id
        pending["task_kind"] = task.kind
    return pending


def _turns_since(managed: ManagedSession, start: int) -> list[dict[str, Any]]:
    with managed.cond:
        return [t.to_dict() for t in managed.session.transcript[start:]]


def create_app(cfg: ServiceConfig | None = None) -> FastAPI:
    cfg = cfg or load_config()
    app = FastAPI(title="bloomtutor session service", version="0.1.0")
    registry = SessionRegistry(cfg)
    app.state.registry = registry

    @app.exception_handler(HTTPException)
    async def on_http_error(request: Request, exc: HTTPException) -> JSONResponse:
        detail = exc.detail if isinstance(exc.detail, dict) else {"code": "error", "message": str(exc.detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request) -> dict[str, Any]:
        content_type = request.headers.get("content-type", "")
        files: list[tuple[str, bytes]] = []
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            goal = str(form.get("goal", ""))
            raw_config = form.get("config")
            config_data = json.loads(str(raw_config)) if raw_config else {}
            for item in form.getlist("materials"):
                if isinstance(item, UploadFile):
                    files.append((item.filename or "material.txt", await item.read()))
        else:
            payload = await request.json()
            goal = str(payload.get("goal", ""))
            config_data = payload.get("config", {}) or {}
        try:
            session_config = SessionConfig.from_dict(config_data)
        except (TutorError, ValueError) as exc:
            raise HTTPException(status_code=422, detail={"code": "bad_config", "message": str(exc)})
        return await asyncio.to_thread(_create_with, goal, session_config, files)

    def _create_with(goal: str, session_config: SessionConfig, files: list[tuple[str, bytes]]) -> dict[str, Any]:
        if not goal.strip():
            raise HTTPException(status_code=422, detail={"code": "empty_goal", "message": "goal is required"})
        sid = registry.new_id()
        script = build_demo_script(goal) if cfg.backend_kind == "scripted" else None
        gateway = build_gateway(cfg, script=script)
        provider = build_search_provider(cfg)
        digests: list[MaterialDigest] = []
        if files:
            documents = [(name, data, _kind_for(name)) for name, data in files]
            digests = ingest_materials(documents, gateway)
        jsonl_path = Path(cfg.store_dir) / "sessions" / f"{sid}.jsonl"
        cond = threading.Condition()
        try:
            session = TutorSession(
                session_config,
                goal,
                gateway,
                memory=registry.memory,
                provider=provider,
                materials=digests,
                session_id=sid,
                jsonl_path=jsonl_path,
            )
        except TutorError as exc:
            raise HTTPException(status_code=422, detail={"code": "setup_failed", "message": str(exc)})
        endpoint = QueueEndpoint(cond, cfg.idle_timeout_s)
        managed = ManagedSession(
            session=session, endpoint=endpoint, gateway=gateway, cond=cond, jsonl_path=jsonl_path
        )
        session.recorder.on_turn = lambda turn: managed.push_event("turn", turn.to_dict())
        registry.add(sid, managed)
        _start_thread(managed)
        _wait_for_idle(managed, after_seq=0)
        return {
            "session_id": sid,
            "goal": goal,
            "pending": _pending_of(managed),
            "turns": _turns_since(managed, 0),
        }

    def _resume_if_suspended(managed: ManagedSession) -> ManagedSession:
        with managed.cond:
            if managed.status != "suspended":
                return managed
            managed.status = "running"
        session = replay_session(
            managed.jsonl_path,
            managed.gateway,
            memory=registry.memory,
        )
        session.recorder.on_turn = lambda turn: managed.push_event("turn", turn.to_dict())
        endpoint = QueueEndpoint(managed.cond, cfg.idle_timeout_s)
        managed.session = session
        managed.endpoint = endpoint
        _start_thread(managed)
        _wait_for_idle(managed, after_seq=0)
        return managed

    @app.post("/sessions/{sid}/messages")
    def post_message(sid: str, payload: dict) -> dict[str, Any]:
        managed = _resume_if_suspended(registry.get(sid))
        content = str(payload.get("content", "")).strip()
        if not content:
            raise HTTPException(status_code=422, detail={"code": "empty_message", "message": "content is required"})
        with managed.cond:
            awaiting = managed.endpoint.awaiting
            seq = managed.endpoint.await_seq
            status = managed.status
        if status != "running" or awaiting is None or awaiting[0] not in ("question", "dialogue"):
            raise HTTPException(
                status_code=409,
                detail={"code": "not_awaiting_message", "message": f"session is not awaiting a message ({status})"},
            )
        start = len(managed.session.transcript)
        managed.endpoint.inbox.put(content)
        _wait_for_idle(managed, after_seq=seq)
        return {
            "turns": _turns_since(managed, start),
            "pending": _pending_of(managed),
            "done": managed.session.done,
        }

    @app.post("/sessions/{sid}/tasks/{task_id}/submission")
    def post_submission(sid: str, task_id: str, payload: dict) -> dict[str, Any]:
        managed = _resume_if_suspended(registry.get(sid))
        content = str(payload.get("content", "")).strip()
        if not content:
            raise HTTPException(status_code=422, detail={"code": "empty_submission", "message": "content is required"})
        with managed.cond:
            awaiting = managed.endpoint.awaiting
            seq = managed.endpoint.await_seq
            status = managed.status
            task = managed.session.current_task
        if status != "running" or awaiting is None or awaiting[0] != "task":
            raise HTTPException(
                status_code=409,
                detail={"code": "not_awaiting_submission", "message": "session is not awaiting a task submission"},
            )
        if task is None or task.id != task_id:
            raise HTTPException(
                status_code=404,
                detail={"code": "unknown_task", "message": f"no pending task {task_id}"},
            )
        start = len(managed.session.transcript)
        managed.endpoint.inbox.put(content)
        _wait_for_idle(managed, after_seq=seq)
        return {
            "turns": _turns_since(managed, start),
            "pending": _pending_of(managed),
            "done": managed.session.done,
        }

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict[str, Any]:
        managed = registry.get(sid)
        with managed.cond:
            return {
                "session_id": sid,
                "goal": managed.session.goal,
                "status": managed.status,
                "turn_index": managed.session.turn_index,
                "turns_limit": managed.session.config.turns,
                "done": managed.session.done,
                "pending": _pending_of(managed),
            }

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str) -> dict[str, Any]:
        managed = registry.get(sid)
        with managed.cond:
            return managed.session.state_snapshot()

    @app.get("/sessions/{sid}/plan")
    def get_plan(sid: str) -> dict[str, Any]:
        managed = registry.get(sid)
        with managed.cond:
            plan = managed.session.plan.to_table()
            plan["materials"] = [
                {"source": d.source, "summary": d.summary} for d in managed.session.digests
            ]
            return plan

    @app.get("/sessions/{sid}/trace")
    def get_trace(sid: str) -> dict[str, Any]:
        managed = registry.get(sid)
        with managed.cond:
            return managed.session.trace or {"nodes": []}

    @app.get("/sessions/{sid}/events")
    async def get_events(
        sid: str, request: Request, last_id: int = -1, follow: bool = True
    ) -> StreamingResponse:
        """SSE turn stream; replays from last_id. follow=false ends after the
        backlog, for polling clients and tests."""
        managed = registry.get(sid)

        async def stream():
            cursor = last_id + 1
            while True:
                with managed.cond:
                    chunk = managed.events[cursor:]
                    status = managed.status
                for event in chunk:
                    payload = json.dumps(event["data"], sort_keys=True)
                    yield f"id: {event['id']}\nevent: {event['event']}\ndata: {payload}\n\n"
                cursor += len(chunk)
                if not follow:
                    break
                if status in ("done", "failed", "suspended") and cursor >= len(managed.events):
                    break
                if await request.is_disconnected():
                    break
                await asyncio.sleep(WAIT_STEP_S)

        return StreamingResponse(stream(), media_type="text/event-stream")

    assets = cfg.assets_dir or str(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    if Path(assets).is_dir():
        app.mount("/", StaticFiles(directory=assets, html=True), name="console")

    return app


def _kind_for(filename: str) -> str:
    return "pdf_text" if filename.endswith(".pdf.txt") else "plain_text"


def main() -> None:
    cfg = load_config()
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port)


if __name__ == "__main__":
    main()
