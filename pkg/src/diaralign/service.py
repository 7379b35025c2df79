"""HTTP evaluation service.

Stateless endpoints mirroring the CLI:

    GET  /health    -> {"status": "ok"}
    POST /align     -> alignment JSON for {"reference", "hypothesis", "options"?}
    POST /evaluate  -> evaluation bundle, accepts "metrics" and "segments" too

Schema violations return 400 with the offending path; oversized payloads 413.
Responses are rendered through the same serializer as the CLI so both
surfaces produce byte-identical documents. If a built viewer is present
(``frontend/dist``), it is served under ``/viewer``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .errors import BudgetError, SchemaError
from .model import extract_sequences, parse_transcript
from .msa.engine import align_sequences, alignment_to_obj
from .pipeline import (
    evaluate_pair,
    options_from_obj,
    segments_from_obj,
    to_json_bytes,
)

DEFAULT_MAX_BODY_BYTES = 64 * 1024 * 1024


async def _read_json(request: Request, max_body_bytes: int) -> dict:
    length = request.headers.get("content-length")
    if length is not None and length.isdigit() and int(length) > max_body_bytes:
        raise _Oversized()
    body = await request.body()
    if len(body) > max_body_bytes:
        raise _Oversized()
    try:
        import json

        obj = json.loads(body)
    except ValueError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("$", "request body must be a JSON object")
    return obj


class _Oversized(Exception):
    pass


def _parse_pair(obj: dict):
    normalization, params, segmentation = options_from_obj(obj.get("options"))
    if "reference" not in obj:
        raise SchemaError("reference", "missing reference transcript")
    if "hypothesis" not in obj:
        raise SchemaError("hypothesis", "missing hypothesis transcript")
    try:
        reference = parse_transcript(obj["reference"], "reference", normalization)
    except SchemaError as exc:
        raise SchemaError(f"reference.{exc.path}", exc.message) from exc
    try:
        hypothesis = parse_transcript(obj["hypothesis"], "hypothesis", normalization)
    except SchemaError as exc:
        raise SchemaError(f"hypothesis.{exc.path}", exc.message) from exc
    return reference, hypothesis, params, segmentation


def create_app(max_body_bytes: int = DEFAULT_MAX_BODY_BYTES) -> FastAPI:
    app = FastAPI(title="diaralign", docs_url=None, redoc_url=None)

    @app.exception_handler(SchemaError)
    async def _schema_error(_request, exc: SchemaError):
        return JSONResponse(status_code=400,
                            content={"error": exc.message, "path": exc.path})

    @app.exception_handler(BudgetError)
    async def _budget_error(_request, exc: BudgetError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(_Oversized)
    async def _oversized(_request, _exc):
        return JSONResponse(status_code=413,
                            content={"error": "request body too large"})

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/align")
    async def align_endpoint(request: Request):
        obj = await _read_json(request, max_body_bytes)
        reference, hypothesis, params, segmentation = _parse_pair(obj)
        alignment = align_sequences(extract_sequences(reference, hypothesis),
                                    params, segmentation)
        return Response(content=to_json_bytes(alignment_to_obj(alignment)),
                        media_type="application/json")

    @app.post("/evaluate")
    async def evaluate_endpoint(request: Request):
        obj = await _read_json(request, max_body_bytes)
        reference, hypothesis, params, segmentation = _parse_pair(obj)
        segments = None
        if obj.get("segments") is not None:
            segments = segments_from_obj(obj["segments"])
        metric_names = obj.get("metrics")
        if metric_names is not None and (
            not isinstance(metric_names, list)
            or not all(isinstance(m, str) for m in metric_names)
        ):
            raise SchemaError("metrics", "must be a list of metric names")
        bundle = evaluate_pair(reference, hypothesis, params, segmentation,
                               metric_names=metric_names, segments=segments)
        return Response(content=to_json_bytes(bundle), media_type="application/json")

    viewer_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if viewer_dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/viewer", StaticFiles(directory=viewer_dist, html=True), name="viewer")

    return app
