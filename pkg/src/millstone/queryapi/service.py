"""HTTP service: POST /api (query envelope), GET /api/schema, GET /healthz.

Requests carry ``{"query": "...", "variables": {...}}``; responses are either
``{"data": {...}}`` or ``{"errors": [{"code", "message", "path"}]}``.
Every operation requires a valid ``Authorization: Bearer`` token; all
authentication failures map to HTTP 401 with a distinct error code.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..engine import Engine
from ..errors import AuthError, MillstoneError
from .auth import authenticate
from .executor import execute
from .parser import bind_variables, parse_query
from .schema import schema_document

ADDR_ENV = "MILLSTONE_ADDR"
SIGNING_KEY_ENV = "MILLSTONE_SIGNING_KEY"
STORE_ROOT_ENV = "MILLSTONE_STORE_ROOT"


def _error_body(code: str, message: str, path=()):
    return {"errors": [{"code": code, "message": message, "path": list(path)}]}


def create_app(engine: Engine, signing_key: str) -> FastAPI:
    app = FastAPI(title="millstone", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "indexes": engine.index_names()}

    @app.get("/api/schema")
    def schema():
        return schema_document()

    @app.post("/api")
    async def api(request: Request):
        try:
            authenticate(request.headers.get("authorization"), signing_key)
        except AuthError as exc:
            return JSONResponse(_error_body(exc.code, exc.message), status_code=401)
        try:
            body = await request.json()
        except Exception:
            return JSONResponse(
                _error_body("BadRequest", "request body must be JSON"), status_code=400
            )
        query = body.get("query") if isinstance(body, dict) else None
        if not isinstance(query, str):
            return JSONResponse(
                _error_body("BadRequest", "missing query text"), status_code=400
            )
        variables = body.get("variables")
        if variables is not None and not isinstance(variables, dict):
            return JSONResponse(
                _error_body("BadRequest", "variables must be an object"), status_code=400
            )
        op_name = ""
        try:
            ast = parse_query(query)
            op_name = ast.operation_name
            bound, _warnings = bind_variables(ast, variables)
            result = execute(engine, bound.operation)
        except MillstoneError as exc:
            return JSONResponse(_error_body(exc.code, exc.message, [op_name] if op_name else []))
        return {"data": {op_name: result}}

    return app


def serve(engine: Engine, signing_key: str, host: str = "127.0.0.1", port: int = 8080):
    import uvicorn

    app = create_app(engine, signing_key)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def signing_key_from_env() -> str | None:
    return os.environ.get(SIGNING_KEY_ENV)
