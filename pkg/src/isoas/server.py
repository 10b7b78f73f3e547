"""HTTP service for the query console.

Pipeline endpoints (/api/query, /api/sql, /api/saved/{name}/run) always
answer 200 with a serialized PipelineResponse; understanding failures are
data in its `error` field. Management endpoints use conventional REST
statuses: 404 unknown resource, 409 conflict, 400 malformed payload.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import Engine, PipelineResponse
from .errors import (
    ArityMismatch,
    DuplicateId,
    InvalidName,
    IsoasError,
    MalformedRow,
    NameInUse,
    SqlSyntaxError,
    StoreDetached,
    UnknownQuery,
    UnknownStore,
    WrongState,
)

_STATUS_FOR = (
    ((UnknownStore, UnknownQuery), 404),
    ((NameInUse, WrongState, StoreDetached), 409),
    ((InvalidName, MalformedRow, DuplicateId, SqlSyntaxError, ArityMismatch), 400),
)


def _http_error(exc: IsoasError) -> HTTPException:
    for types, status in _STATUS_FOR:
        if isinstance(exc, types):
            return HTTPException(status_code=status, detail=exc.to_json())
    return HTTPException(status_code=400, detail=exc.to_json())


class QueryRequest(BaseModel):
    text: str
    session: str | None = None
    store: str | None = None


class SqlRequest(BaseModel):
    sql: str
    session: str | None = None
    store: str | None = None


class SavedQueryRequest(BaseModel):
    name: str
    body: str
    kind: str
    overwrite: bool = False


class RunRequest(BaseModel):
    bindings: list[str | int | float] = []
    session: str | None = None
    store: str | None = None


class StoreRequest(BaseModel):
    name: str


class IngestRequest(BaseModel):
    store: str
    csv: str


def _pipeline_json(resp: PipelineResponse) -> Response:
    # canonical bytes, identical to an in-process serialization
    return Response(content=resp.to_json_bytes(), media_type="application/json")


def create_app(engine: Engine, console_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="isoas", docs_url=None, redoc_url=None)

    @app.post("/api/query")
    def api_query(req: QueryRequest) -> Response:
        return _pipeline_json(engine.process(req.text, req.session, req.store))

    @app.post("/api/sql")
    def api_sql(req: SqlRequest) -> Response:
        return _pipeline_json(engine.run_sql(req.sql, req.session, req.store))

    @app.get("/api/history")
    def api_history(session: str = "") -> dict:
        entries = engine.repo.history(session)
        return {"session": session, "entries": [e.to_json() for e in entries]}

    @app.get("/api/saved")
    def api_saved_list() -> dict:
        return {"queries": [sq.to_json() for sq in engine.repo.list_queries()]}

    @app.get("/api/saved/{name}")
    def api_saved_get(name: str) -> dict:
        try:
            return engine.repo.load_query(name).to_json()
        except IsoasError as exc:
            raise _http_error(exc) from None

    @app.post("/api/saved", status_code=201)
    def api_saved_save(req: SavedQueryRequest) -> dict:
        from .repository import SavedQuery

        try:
            saved = engine.repo.save_query(
                SavedQuery(name=req.name, body=req.body, kind=req.kind),
                overwrite=req.overwrite,
            )
        except IsoasError as exc:
            raise _http_error(exc) from None
        return saved.to_json()

    @app.delete("/api/saved/{name}")
    def api_saved_delete(name: str) -> dict:
        try:
            engine.repo.delete_query(name)
        except IsoasError as exc:
            raise _http_error(exc) from None
        return {"deleted": name}

    @app.post("/api/saved/{name}/run")
    def api_saved_run(name: str, req: RunRequest) -> Response:
        try:
            engine.repo.load_query(name)  # unknown name is a 404, not a domain error
        except IsoasError as exc:
            raise _http_error(exc) from None
        return _pipeline_json(engine.run_saved(name, req.bindings, req.session, req.store))

    @app.get("/api/stores")
    def api_stores() -> dict:
        return {"stores": engine.repo.list_stores()}

    @app.post("/api/stores", status_code=201)
    def api_store_create(req: StoreRequest) -> dict:
        try:
            return engine.repo.create_store(req.name)
        except IsoasError as exc:
            raise _http_error(exc) from None

    @app.post("/api/stores/{name}/attach")
    def api_store_attach(name: str) -> dict:
        try:
            return engine.repo.attach_store(name)
        except IsoasError as exc:
            raise _http_error(exc) from None

    @app.post("/api/stores/{name}/detach")
    def api_store_detach(name: str) -> dict:
        try:
            return engine.repo.detach_store(name)
        except IsoasError as exc:
            raise _http_error(exc) from None

    @app.post("/api/ingest")
    def api_ingest(req: IngestRequest) -> dict:
        try:
            count = engine.repo.ingest(req.store, req.csv)
        except IsoasError as exc:
            raise _http_error(exc) from None
        return {"store": req.store, "count": count}

    static = _find_console(console_dir)
    if static is not None:
        app.mount("/", StaticFiles(directory=static, html=True), name="console")
    else:

        @app.get("/")
        def index() -> dict:
            return {
                "service": "isoas",
                "console": "not bundled; build frontend/ and pass --console",
                "api": [
                    "POST /api/query",
                    "POST /api/sql",
                    "GET /api/history?session=",
                    "GET|POST|DELETE /api/saved[/name]",
                    "POST /api/saved/{name}/run",
                    "GET|POST /api/stores",
                    "POST /api/stores/{name}/attach|detach",
                    "POST /api/ingest",
                ],
            }

    return app


def _find_console(console_dir: str | Path | None) -> Path | None:
    candidates = []
    if console_dir:
        candidates.append(Path(console_dir))
    candidates.append(Path(__file__).parent / "static")
    for path in candidates:
        if path.is_dir() and (path / "index.html").exists():
            return path
    return None


def serve(
    engine: Engine,
    host: str = "127.0.0.1",
    port: int = 8000,
    console_dir: str | Path | None = None,
) -> None:
    import uvicorn

    from .errors import BindFailure

    app = create_app(engine, console_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except OSError as exc:
        raise BindFailure(host, port, str(exc)) from None
