"""HTTP JSON API over the engine.

Read endpoints are pure functions of (engine state, request); notebook
writes are serialized inside NotebookStore. Recent retrieval results are
cached under opaque tokens so re-ranking and mode toggles reuse the already
computed rows instead of re-running kNN.
"""

from __future__ import annotations

import threading
import uuid
from collections import OrderedDict
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .engine import Engine, build_engine
from .errors import ConfigurationError, NotFoundError
from .retrieve import CursorContext, RetrievalResult

RESULT_CACHE_SIZE = 64
RENDER_MODES = ("color", "grey", "plain")


class ApiError(Exception):
    STATUS = {"bad_request": 400, "not_found": 404, "conflict": 409,
              "config_error": 500, "internal": 500}

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message

    @property
    def status(self) -> int:
        return self.STATUS[self.code]


class RetrieveBody(BaseModel):
    section_title: str
    paragraph_text: str
    offset: int = Field(default=0, ge=0)
    mode: str = "color"


class RerankBody(BaseModel):
    result_token: str
    anchor_row: int
    mode: Optional[str] = None


class AnnotationsBody(BaseModel):
    result_token: str
    mode: str


class BookmarkBody(BaseModel):
    sentence_id: str


class NoteBody(BaseModel):
    text: str


class _ResultCache:
    def __init__(self, capacity: int = RESULT_CACHE_SIZE) -> None:
        self._entries: "OrderedDict[str, tuple[RetrievalResult, str]]" = OrderedDict()
        self._capacity = capacity
        self._lock = threading.Lock()

    def put(self, result: RetrievalResult, mode: str) -> str:
        token = uuid.uuid4().hex
        with self._lock:
            self._entries[token] = (result, mode)
            while len(self._entries) > self._capacity:
                self._entries.popitem(last=False)
        return token

    def get(self, token: str) -> "tuple[RetrievalResult, str]":
        with self._lock:
            entry = self._entries.get(token)
        if entry is None:
            raise ApiError("not_found", "stale or unknown result token")
        return entry


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="corpusdesk", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    cache = _ResultCache()

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(NotFoundError)
    async def handle_not_found(_req: Request, exc: NotFoundError):
        return JSONResponse(status_code=404,
                            content={"code": "not_found", "message": str(exc)})

    @app.exception_handler(ValueError)
    async def handle_value_error(_req: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"code": "bad_request", "message": str(exc)})

    @app.exception_handler(ConfigurationError)
    async def handle_config_error(_req: Request, exc: ConfigurationError):
        return JSONResponse(status_code=500,
                            content={"code": "config_error", "message": str(exc)})

    def render_result(result: RetrievalResult, mode: str) -> dict:
        token = cache.put(result, mode)
        return {
            "rows": engine.result_to_json(result),
            "annotations": engine.annotations(result, mode),
            "result_token": token,
        }

    def check_mode(mode: str) -> str:
        if mode not in RENDER_MODES:
            raise ApiError("bad_request", f"mode must be one of {RENDER_MODES}")
        return mode

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/pdc")
    def pdc():
        return engine.pdc_json()

    @app.post("/retrieve")
    def retrieve(body: RetrieveBody):
        check_mode(body.mode)
        ctx = CursorContext(section_title=body.section_title,
                            paragraph_text=body.paragraph_text,
                            offset=body.offset)
        result = engine.retrieve(ctx)
        return render_result(result, body.mode)

    @app.post("/retrieve/rerank")
    def retrieve_rerank(body: RerankBody):
        result, mode = cache.get(body.result_token)
        if body.mode is not None:
            mode = check_mode(body.mode)
        try:
            reranked = engine.rerank(result, body.anchor_row)
        except IndexError as exc:
            raise ApiError("bad_request", str(exc))
        return render_result(reranked, mode)

    @app.post("/retrieve/annotations")
    def retrieve_annotations(body: AnnotationsBody):
        result, _ = cache.get(body.result_token)
        mode = check_mode(body.mode)
        return {"annotations": engine.annotations(result, mode),
                "result_token": body.result_token}

    @app.get("/sentence/{sentence_id}/context")
    def get_sentence_context(sentence_id: str):
        ctx = engine.tooltip(sentence_id)
        return {
            "paper_title": ctx.paper_title,
            "paper_url": ctx.paper_url,
            "section_path": list(ctx.section_path),
            "prev_text": ctx.prev_text,
            "next_text": ctx.next_text,
            "citations": [{"marker": c.marker, "authors": c.authors,
                           "cited_title": c.cited_title} for c in ctx.citations],
        }

    def bookmark_json(bm) -> dict:
        note = engine.notebook.note_for(bm.bookmark_id)
        return {
            "bookmark_id": bm.bookmark_id,
            "sentence_id": bm.sentence_id,
            "created_at": bm.created_at,
            "snapshot": {
                "sentence_text": bm.snapshot.sentence_text,
                "paper_title": bm.snapshot.paper_title,
                "paper_url": bm.snapshot.paper_url,
                "section_path": list(bm.snapshot.section_path),
            },
            "note": ({"note_id": note.note_id, "text": note.text,
                      "updated_at": note.updated_at} if note else None),
        }

    @app.post("/bookmarks", status_code=201)
    def add_bookmark(body: BookmarkBody):
        bm = engine.notebook.add_bookmark(body.sentence_id, engine.store)
        return bookmark_json(bm)

    @app.delete("/bookmarks/{bookmark_id}", status_code=204)
    def delete_bookmark(bookmark_id: str):
        engine.notebook.remove_bookmark(bookmark_id)
        return Response(status_code=204)

    @app.put("/bookmarks/{bookmark_id}/note")
    def put_note(bookmark_id: str, body: NoteBody):
        note = engine.notebook.upsert_note(bookmark_id, body.text)
        if note is None:
            return {"note_id": None, "text": "", "updated_at": None}
        return {"note_id": note.note_id, "text": note.text,
                "updated_at": note.updated_at}

    @app.get("/bookmarks")
    def list_bookmarks():
        return {"bookmarks": [bookmark_json(bm) for bm in engine.notebook.bookmarks()]}

    @app.get("/export/bookmarks.csv")
    def export_csv():
        return Response(content=engine.notebook.export_csv(),
                        media_type="text/csv; charset=utf-8")

    return app


def serve(config_path: str) -> None:
    """Build the engine from a config file and run the HTTP service."""
    import uvicorn

    from .config import load_config

    config = load_config(config_path)
    engine = build_engine(config)
    app = create_app(engine)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
