"""HTTP/JSON API over the project workspace.

All request and response bodies use the same JSON schema the store persists,
so a client can rebuild its entire view from GET endpoints alone. Errors
carry a machine-readable ``code`` from the error taxonomy.
"""

from __future__ import annotations

from typing import Callable, Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from . import workspace
from .errors import (
    CassetteMiss,
    NotFound,
    ParseFailure,
    ProviderUnavailable,
    ReelsmithError,
    StageViolation,
    UnknownScript,
    UnknownSpeaker,
    ValidationError,
)
from .highlight import Backend, HighlightConfig
from .model import Article, Condition, Framing, Stage
from .providers import ProviderSession
from .scriptgen import LintPolicy, format_script, lint_script, script_history
from .workspace import ProjectStore

STATUS_BY_CODE = {
    NotFound.code: 404,
    UnknownScript.code: 404,
    StageViolation.code: 409,
    ValidationError.code: 422,
    ParseFailure.code: 502,
    UnknownSpeaker.code: 422,
    ProviderUnavailable.code: 502,
    CassetteMiss.code: 502,
}


class ArticleIn(BaseModel):
    headline: str
    body: str
    source_url: Optional[str] = None


class PremisePatch(BaseModel):
    characters: Optional[list[str]] = None
    plot: Optional[str] = None
    setting: Optional[str] = None
    info_points: Optional[list[str]] = None


class ScriptPatch(BaseModel):
    text: str


class HighlightsIn(BaseModel):
    threshold: float = 0.5
    backend: str = Backend.LEXICAL_FALLBACK.value


SessionFactory = Callable[[], ProviderSession]


def create_app(store: ProjectStore, session_factory: SessionFactory) -> FastAPI:
    app = FastAPI(title="reelsmith", docs_url=None, redoc_url=None)

    @app.exception_handler(ReelsmithError)
    async def handle_domain_error(request: Request, exc: ReelsmithError):
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 400),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    def project_payload(project) -> dict:
        data = project.to_dict()
        active = (
            project.script_by_id(project.active_script_id)
            if project.active_script_id
            else None
        )
        data["formatted_script"] = format_script(active) if active else None
        data["lint"] = (
            [f.to_dict() for f in lint_script(active, LintPolicy())] if active else []
        )
        return data

    @app.get("/projects")
    def list_projects():
        return {"projects": store.list_projects()}

    @app.post("/projects", status_code=201)
    def create_project(article: ArticleIn):
        project = store.create_project(
            Article(
                headline=article.headline,
                body=article.body,
                source_url=article.source_url,
            )
        )
        return project_payload(project)

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        return project_payload(store.load(project_id))

    @app.post("/projects/{project_id}/extract")
    def extract(project_id: str):
        project = workspace.do_extract(store, project_id, session_factory())
        return project_payload(project)

    @app.post("/projects/{project_id}/premises")
    def generate_premise(project_id: str, framing: str = Query(...)):
        try:
            framing_value = Framing(framing)
        except ValueError:
            raise ValidationError(f"unknown framing: {framing!r}")
        project, premise = workspace.do_generate_premise(
            store, project_id, framing_value, session_factory()
        )
        return {"project": project_payload(project), "premise": premise.to_dict()}

    @app.patch("/projects/{project_id}/premises/{premise_id}")
    def edit_premise(project_id: str, premise_id: str, patch: PremisePatch):
        fields = {k: v for k, v in patch.model_dump().items() if v is not None}
        project, premise = workspace.do_edit_premise(
            store, project_id, premise_id, fields
        )
        return {"project": project_payload(project), "premise": premise.to_dict()}

    @app.post("/projects/{project_id}/scripts")
    def generate_script(
        project_id: str,
        condition: str = Query(...),
        framing: Optional[str] = Query(default=None),
        premise_id: Optional[str] = Query(default=None),
    ):
        try:
            condition_value = Condition(condition)
        except ValueError:
            raise ValidationError(f"unknown condition: {condition!r}")
        framing_value = None
        if framing is not None:
            try:
                framing_value = Framing(framing)
            except ValueError:
                raise ValidationError(f"unknown framing: {framing!r}")
        project, script = workspace.do_generate_script(
            store, project_id, condition_value, session_factory(),
            framing=framing_value, premise_id=premise_id,
        )
        return {"project": project_payload(project), "script": script.to_dict()}

    @app.get("/projects/{project_id}/scripts")
    def list_scripts(project_id: str):
        project = store.load(project_id)
        return {
            "scripts": [s.to_dict() for s in script_history(project)],
            "active_script_id": project.active_script_id,
        }

    @app.post("/projects/{project_id}/scripts/{script_id}/star")
    def star(project_id: str, script_id: str):
        project, script = workspace.do_star_script(store, project_id, script_id)
        return {"project": project_payload(project), "script": script.to_dict()}

    @app.patch("/projects/{project_id}/scripts/{script_id}")
    def edit_script(project_id: str, script_id: str, patch: ScriptPatch):
        project, script = workspace.do_edit_script(
            store, project_id, script_id, patch.text
        )
        return {"project": project_payload(project), "script": script.to_dict()}

    @app.post("/projects/{project_id}/highlights")
    def highlights(project_id: str, body: HighlightsIn | None = None):
        body = body or HighlightsIn()
        config = HighlightConfig(
            threshold=body.threshold, backend=Backend(body.backend)
        )
        session = (
            session_factory() if config.backend is Backend.EMBEDDING_COSINE else None
        )
        project, highlight_set = workspace.do_assign_highlights(
            store, project_id, config, session
        )
        return {
            "project": project_payload(project),
            "highlights": highlight_set.to_dict(),
        }

    @app.post("/projects/{project_id}/character-board")
    def character_board(project_id: str):
        project = workspace.do_character_board(store, project_id, session_factory())
        return project_payload(project)

    @app.post("/projects/{project_id}/storyboard")
    def storyboard(project_id: str):
        project = workspace.do_storyboard(store, project_id, session_factory())
        return project_payload(project)

    @app.post("/projects/{project_id}/back")
    def back(project_id: str, target: str = Query(...)):
        try:
            stage = Stage(target)
        except ValueError:
            raise ValidationError(f"unknown stage: {target!r}")
        project = workspace.do_back(store, project_id, stage)
        return project_payload(project)

    @app.get("/projects/{project_id}/export")
    def export(project_id: str):
        project = store.load(project_id)
        destination = store.project_dir(project_id) / "export"
        manifest = workspace.export_bundle(project, destination, store)
        return {"destination": str(destination), "manifest": manifest}

    @app.get("/projects/{project_id}/blobs/{name}")
    def blob(project_id: str, name: str):
        if "/" in name or name.startswith("."):
            raise ValidationError("invalid blob name")
        path = store.blob_path(project_id, name)
        if not path.exists():
            raise NotFound(f"no blob named {name!r}")
        media = "image/png" if name.endswith(".png") else "application/octet-stream"
        return FileResponse(path, media_type=media)

    return app
