"""HTTP diagnose service: POST /diagnose and GET /health."""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..diagnose import TableCache
from ..errors import BudgetExceeded, DomainError, ParseError, UnknownDomain
from .api import build_config, execute_diagnose


class DiagnoseRequest(BaseModel):
    domain_id: str = Field(min_length=1)
    task: str = Field(min_length=1)
    input: str = Field(min_length=1)
    previous_input: Optional[str] = None
    mode: Optional[Literal["normal", "reduce"]] = None
    reduce_limit: Optional[int] = Field(default=None, ge=1)
    max_buggy_applications: Optional[int] = Field(default=None, ge=0)


def create_app(cache: TableCache | None = None) -> FastAPI:
    app = FastAPI(title="mbt diagnose service")
    table_cache = cache if cache is not None else TableCache()

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        # Schema violations are client mistakes, not unprocessable content.
        return JSONResponse(
            status_code=400,
            content={"status": "error", "reason": "malformed request"},
        )

    @app.post("/diagnose")
    def diagnose_endpoint(req: DiagnoseRequest):
        cfg = build_config(
            mode=req.mode,
            reduce_limit=req.reduce_limit,
            max_buggy=req.max_buggy_applications,
        )
        try:
            payload = execute_diagnose(
                req.domain_id,
                req.task,
                req.input,
                previous_text=req.previous_input,
                cfg=cfg,
                cache=table_cache,
            )
        except (ParseError, DomainError, UnknownDomain) as exc:
            return JSONResponse(
                status_code=422,
                content={"status": "error", "reason": str(exc)},
            )
        except BudgetExceeded as exc:
            return JSONResponse(
                status_code=503,
                content={"status": "error", "reason": str(exc)},
            )
        return JSONResponse(content=payload)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    return app
