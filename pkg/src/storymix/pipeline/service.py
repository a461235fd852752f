"""HTTP API for the studio UI and other clients.

All project mutation goes through POST endpoints serialized per project
(FIFO); reads serve immutable history and are lock-free. Progress events are
exposed both as a long-poll endpoint and as a server-sent event stream.
"""
from __future__ import annotations

import asyncio
import json
import logging
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse
from pydantic import BaseModel

from ..errors import ProjectError, StorymixError
from ..refine import execute_refinement
from ..script import script_to_dict
from .orchestrate import run_pipeline
from .project import EngineConfig, Project
from .registryless import gateway_for_project

log = logging.getLogger(__name__)


class CreateProjectBody(BaseModel):
    prompt: str
    project_id: str | None = None
    config: dict | None = None


class FeedbackBody(BaseModel):
    text: str
    cursor_time: float | None = None
    expected_version: int | None = None
    mode: str = "grammar"


def create_app(project_root, gateway_factory=None, frontend_dist=None) -> FastAPI:
    """App over a directory of projects.

    `gateway_factory(config) -> Gateway` defaults to the mock-backed registry;
    inject to point capabilities at remote services or scripted mocks.
    """
    root = Path(project_root)
    root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="storymix engine")
    factory = gateway_factory or gateway_for_project
    projects: dict[str, Project] = {}

    def project(project_id: str) -> Project:
        if project_id in projects:
            return projects[project_id]
        try:
            p = Project(root / project_id)
        except ProjectError:
            raise _http_error(404, f"unknown project {project_id!r}")
        p.gateway = factory(p.config)
        projects[project_id] = p
        return p

    @app.get("/api/projects")
    def list_projects():
        out = []
        for path in sorted(root.iterdir()):
            if (path / "project.json").exists():
                out.append(project(path.name).summary())
        return out

    @app.post("/api/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        config = EngineConfig.from_dict(body.config or {})
        try:
            p = run_pipeline(prompt=body.prompt, root=root, project_id=body.project_id,
                             config=config, gateway=factory(config))
        except StorymixError as exc:
            raise _http_error(422, str(exc))
        projects[p.project_id] = p
        return p.summary()

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        return project(project_id).summary()

    @app.get("/api/projects/{project_id}/script")
    def get_script(project_id: str, version: int | None = None):
        p = project(project_id)
        try:
            script = p.script(version)
        except ProjectError as exc:
            raise _http_error(404, str(exc))
        return script_to_dict(script)

    @app.get("/api/projects/{project_id}/render")
    def get_render(project_id: str, version: int | None = None):
        p = project(project_id)
        try:
            path = p.render_path(version)
        except ProjectError as exc:
            raise _http_error(404, str(exc))
        return FileResponse(path, media_type="audio/wav", filename=path.name)

    @app.get("/api/projects/{project_id}/attempts")
    def get_attempts(project_id: str):
        return project(project_id).loop_records()

    @app.post("/api/projects/{project_id}/feedback")
    def post_feedback(project_id: str, body: FeedbackBody):
        p = project(project_id)
        with p.lock:  # feedback rounds are strictly FIFO per project
            if body.expected_version is not None and \
                    body.expected_version != p.current_version:
                raise _http_error(
                    409,
                    f"stale version {body.expected_version}; "
                    f"current is {p.current_version}",
                )
            round_ = execute_refinement(p, body.text, cursor_time=body.cursor_time,
                                        mode=body.mode)
        response = {
            "no_parse": round_.no_parse,
            "unparsed": [{"text": u.text, "reason": u.reason} for u in round_.parse.unparsed],
            "rejected": [
                {"target": r.command.target.describe(), "reason": r.reason}
                for r in round_.rejected
            ],
            "version": round_.new_version or p.current_version,
        }
        if round_.edit is not None:
            response.update(
                applied=[
                    {"category": c.category, "target": c.target.describe(),
                     "payload": c.payload}
                    for c in round_.edit.applied
                ],
                regenerated=round_.edit.regen_plan,
                render_url=f"/api/projects/{project_id}/render?version={round_.new_version}",
            )
        return response

    @app.get("/api/projects/{project_id}/events")
    def get_events(project_id: str, after: int = 0, wait: float = 0.0):
        p = project(project_id)
        events = p.events.wait(after, timeout=min(wait, 25.0)) if wait else p.events.since(after)
        return {"events": events, "next_after": events[-1]["seq"] if events else after}

    @app.get("/api/projects/{project_id}/events/stream")
    async def stream_events(project_id: str, after: int = 0):
        p = project(project_id)

        async def generate():
            cursor = after
            while True:
                events = await asyncio.to_thread(p.events.wait, cursor, 5.0)
                for event in events:
                    cursor = event["seq"]
                    yield f"id: {event['seq']}\nevent: {event['type']}\n" \
                          f"data: {json.dumps(event, sort_keys=True)}\n\n"
                if not events:
                    yield ": keepalive\n\n"

        return StreamingResponse(generate(), media_type="text/event-stream")

    if frontend_dist and Path(frontend_dist).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dist, html=True), name="studio")

    return app


def _http_error(status: int, message: str):
    from fastapi import HTTPException

    return HTTPException(status_code=status, detail=message)
