"""REST endpoints of the annotation service.

Bodies are JSON; masks travel as base64-encoded indexed PNG. Every
response is built from client-view dicts, which never carry the hidden
checkpoint assignment.
"""

from __future__ import annotations

import base64
import mimetypes

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse, Response
from pydantic import BaseModel

from ..errors import (
    EmptyTraceError,
    IncompleteBatchError,
    InsufficientImagesError,
    NotInSessionError,
    ScribbleSegError,
    UnknownDatasetError,
    UnknownImageError,
    UnknownSessionError,
)
from .config import ServiceConfig
from .storage import AnnotationStore, SessionClosedError

_STATUS_BY_ERROR = (
    (UnknownDatasetError, 404),
    (UnknownSessionError, 404),
    (UnknownImageError, 404),
    (NotInSessionError, 404),
    (InsufficientImagesError, 409),
    (IncompleteBatchError, 409),
    (EmptyTraceError, 409),
    (SessionClosedError, 409),
)


class CreateSessionBody(BaseModel):
    user_id: str
    dataset_id: str


def create_app(config: ServiceConfig, clock=None) -> FastAPI:
    store_kwargs = {"rng_seed": config.rng_seed}
    if clock is not None:
        store_kwargs["clock"] = clock
    store = AnnotationStore(config.data_root, **store_kwargs)

    app = FastAPI(title="scribbleseg annotation service")
    app.state.store = store

    @app.exception_handler(ScribbleSegError)
    async def on_domain_error(_, exc: ScribbleSegError):
        status = 400
        for err_type, code in _STATUS_BY_ERROR:
            if isinstance(exc, err_type):
                status = code
                break
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "datasets": len(store.list_datasets())}

    @app.get("/datasets")
    def list_datasets() -> dict:
        return {"datasets": store.list_datasets()}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        session = store.create_session(body.user_id, body.dataset_id)
        return store.session_view(session.session_id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return store.session_view(session_id)

    @app.get("/images/{image_id}")
    def get_image(image_id: str, dataset_id: str | None = Query(default=None)):
        path = store.image_file(image_id, dataset_id)
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    @app.put("/sessions/{session_id}/images/{image_id}/trace")
    def put_trace(session_id: str, image_id: str, doc: dict = Body(...)) -> dict:
        try:
            return store.put_trace(session_id, image_id, doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad stroke document: {exc}")

    @app.post("/sessions/{session_id}/images/{image_id}/refine")
    def refine_image(session_id: str, image_id: str) -> dict:
        result = store.refine_image(session_id, image_id)
        return {
            "image_id": result["image_id"],
            "refine_count": result["refine_count"],
            "mask_png_base64": base64.b64encode(result["mask_png"]).decode("ascii"),
            "likelihood_summary": result["likelihood_summary"],
        }

    @app.post("/sessions/{session_id}/submit")
    def submit_batch(session_id: str) -> dict:
        outcome = store.submit_batch(session_id)
        view = store.session_view(session_id)
        return {
            "passed": outcome["passed"],
            "scores": outcome["scores"],
            "session": view,
        }

    @app.get("/datasets/{dataset_id}/export")
    def export_dataset(dataset_id: str) -> Response:
        data = store.export_zip(dataset_id)
        return Response(
            content=data,
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="{dataset_id}_masks.zip"'
            },
        )

    static_dir = config.resolved_static_dir
    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
