"""HTTP session service exposing episodes to external agents and the cockpit.

The server owns all episode state; clients hold only a session token. Engine
contracts pass through one-to-one, with machine-readable error codes, so a
decision sequence driven over the wire produces a transcript identical to the
same sequence driven in-process.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .engine import Episode, EpisodeConfig
from .errors import ArenaError, ScenarioNotFound, SessionNotFound
from .scenario import EpochConfig, Scenario, anonymize_label, load_scenario
from .synth import default_scenario

_STATUS = {
    "scenario_not_found": 404,
    "session_not_found": 404,
    "schema_error": 400,
    "bad_assumptions": 400,
    "non_positive_amount": 400,
    "out_of_range": 400,
    "bad_profile": 400,
    "invariant_violation": 500,
}
_DEFAULT_STATUS = 409  # contract violations, budget, second action, episode over


class ScenarioCatalog:
    def __init__(self):
        self._scenarios: dict[str, Scenario] = {}

    def register(self, scenario: Scenario) -> None:
        self._scenarios[scenario.id] = scenario

    def load_dir(self, root: str | Path) -> None:
        """Register every bundle directory under root."""
        for child in sorted(Path(root).iterdir()):
            if child.is_dir() and (child / "macro.csv").exists():
                self.register(load_scenario(child))

    def get(self, scenario_id: str) -> Scenario:
        if scenario_id not in self._scenarios:
            raise ScenarioNotFound(f"unknown scenario {scenario_id!r}")
        return self._scenarios[scenario_id]

    def listing(self) -> list[dict]:
        return [{"id": s.id, "horizon": s.horizon} for s in self._scenarios.values()]


@dataclass
class Session:
    id: str
    episode: Episode
    client_kind: str
    created_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)


def _error_response(err: ArenaError, session: Session | None = None) -> JSONResponse:
    body = {"error": {"code": err.code, "message": err.message}}
    if session is not None:
        episode = session.episode
        body["error"]["month"] = episode.state.month
        body["error"]["budget_remaining"] = episode.tools.budget.remaining
    return JSONResponse(status_code=_STATUS.get(err.code, _DEFAULT_STATUS), content=body)


def create_app(catalog: ScenarioCatalog | None = None, static_dir: str | Path | None = None) -> FastAPI:
    """Build the service. With no catalog, serves the default synthetic scenario."""
    if catalog is None:
        catalog = ScenarioCatalog()
        catalog.register(default_scenario())

    app = FastAPI(title="cfo-arena session service", version="1")
    sessions: dict[str, Session] = {}

    def _session(session_id: str) -> Session:
        if session_id not in sessions:
            raise SessionNotFound(f"unknown session {session_id!r}")
        return sessions[session_id]

    @app.exception_handler(ArenaError)
    async def _arena_error(_request: Request, err: ArenaError):
        return _error_response(err)

    @app.get("/v1/scenarios")
    def list_scenarios():
        return {"scenarios": catalog.listing()}

    @app.post("/v1/sessions")
    async def create_session(request: Request):
        body = await request.json()
        scenario = catalog.get(str(body.get("scenario_id", "")))
        seed = int(body.get("seed", 0))
        config = body.get("config", {}) or {}
        episode = Episode(
            EpisodeConfig(
                seed=seed,
                agent_label=str(config.get("agent_label", "anonymous")),
                horizon_override=config.get("horizon_override"),
            ),
            scenario,
        )
        session = Session(
            id=uuid.uuid4().hex,
            episode=episode,
            client_kind=str(config.get("client_kind", "agent")),
            created_at=time.time(),
        )
        sessions[session.id] = session
        with session.lock:
            first = episode.start()
        return {"session_id": session.id, **first}

    @app.get("/v1/sessions/{session_id}")
    def session_summary(session_id: str):
        session = _session(session_id)
        with session.lock:
            episode = session.episode
            month = min(episode.state.month, episode.horizon - 1)
            return {
                "session_id": session.id,
                "month_label": anonymize_label(month, EpochConfig(horizon=episode.horizon)),
                "budget_remaining": episode.tools.budget.remaining,
                "alive": not episode.done or episode.survived,
                "done": episode.done,
                "client_kind": session.client_kind,
            }

    @app.post("/v1/sessions/{session_id}/tools")
    async def post_tool(session_id: str, request: Request):
        session = _session(session_id)
        body = await request.json()
        with session.lock:
            try:
                result = session.episode.call_tool(str(body.get("name", "")), body.get("params") or {})
            except ArenaError as err:
                return _error_response(err, session)
            return {"result": result["result"], "budget_remaining": result["budget_remaining"]}

    @app.post("/v1/sessions/{session_id}/memory")
    async def post_memory(session_id: str, request: Request):
        session = _session(session_id)
        body = await request.json()
        with session.lock:
            try:
                record = session.episode.memory_op(str(body.get("op", "")), body.get("payload") or {})
            except ArenaError as err:
                return _error_response(err, session)
            return {"result": record["result"]}

    @app.post("/v1/sessions/{session_id}/action")
    async def post_action(session_id: str, request: Request):
        session = _session(session_id)
        body = await request.json()
        with session.lock:
            try:
                result = session.episode.act(str(body.get("name", "")), body.get("params") or {})
            except ArenaError as err:
                return _error_response(err, session)
            return result

    @app.get("/v1/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = _session(session_id)
        with session.lock:
            payload = session.episode.transcript_bytes()
        return PlainTextResponse(content=payload, media_type="application/x-ndjson")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="cockpit")

    return app


def serve(catalog: ScenarioCatalog | None = None, host: str = "127.0.0.1", port: int = 8000,
          static_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(catalog, static_dir=static_dir), host=host, port=port, log_level="info")
