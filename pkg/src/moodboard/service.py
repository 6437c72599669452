"""HTTP API over the session engine.

All bodies are JSON. Error mapping: validation and domain problems are
400, unknown ids are 404, actions an algorithm variant does not allow
are 409.
"""

from __future__ import annotations

import mimetypes

from fastapi import Body, FastAPI, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from .errors import (
    CorpusError,
    EmptyBoardError,
    ImageNotFoundError,
    MoodboardError,
    QueryError,
    SessionNotFoundError,
    UnsupportedActionError,
    ValidationError,
    VectorDomainError,
)
from .imagery import FixtureCorpusSource
from .session import SessionEngine

_STATUS = {
    ValidationError: 400,
    QueryError: 400,
    VectorDomainError: 400,
    EmptyBoardError: 400,
    CorpusError: 400,
    ImageNotFoundError: 404,
    SessionNotFoundError: 404,
    UnsupportedActionError: 409,
}


def _status_for(exc: MoodboardError) -> int:
    for klass, status in _STATUS.items():
        if isinstance(exc, klass):
            return status
    return 500


def create_app(engine: SessionEngine, images: FixtureCorpusSource | None = None) -> FastAPI:
    app = FastAPI(title="mood board composer", docs_url=None, redoc_url=None)
    # The browser client may be served from a different origin.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(MoodboardError)
    async def moodboard_error(_request, exc: MoodboardError):
        return JSONResponse(status_code=_status_for(exc), content={"error": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def body_validation_error(_request, exc: RequestValidationError):
        # Malformed bodies are validation failures: 400, not the
        # framework's default 422.
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        for key in ("kind", "w1", "w2"):
            if not isinstance(payload.get(key), str):
                raise ValidationError(f"body needs a string {key!r}")
        session = engine.create_session(
            kind=payload["kind"],
            w1=payload["w1"],
            w2=payload["w2"],
            seed=payload.get("seed"),
            config_overrides=payload.get("config"),
        )
        return engine.session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return engine.session_view(engine.get(session_id))

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, payload: dict = Body(...)):
        session = engine.apply_action(session_id, payload)
        return engine.session_view(session)

    @app.post("/sessions/{session_id}/next")
    def post_next(session_id: str):
        session, record = engine.next_iteration(session_id)
        return {"session": engine.session_view(session), "record": record.to_dict()}

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        return engine.export_board(session_id)

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str):
        lines = engine.log_lines(session_id)
        return StreamingResponse(iter(lines), media_type="application/x-ndjson")

    @app.get("/images/{image_id}")
    def get_image(image_id: str):
        if images is None:
            raise ImageNotFoundError("no image corpus attached to this server")
        data = images.image_bytes(image_id)
        uri = images.manifest.by_id()[image_id].uri
        media_type = mimetypes.guess_type(uri)[0] or "application/octet-stream"
        return Response(content=data, media_type=media_type)

    return app
