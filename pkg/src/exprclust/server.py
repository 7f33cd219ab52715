"""HTTP service exposing the pipeline to the browser studio.

Single-user, in-memory session: uploaded datasets, queued grid runs (one
executes at a time), and report/curve accumulation across runs until an
explicit refresh.  Canonical JSON serialization is shared with the CLI so
both surfaces produce identical report bytes.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response

from .exprdata import ExpressionMatrix, PreprocessConfig, parse_matrix, preprocess
from .render import render_heatmap, render_index_curves, render_profile
from .runner import (
    GridResult,
    GridSpecError,
    ReportTable,
    grid_spec_from_json,
    report_json_text,
    run_grid,
)

__all__ = ["SessionState", "create_app", "app"]


@dataclass
class RunRecord:
    run_id: str
    dataset_id: str
    spec_json: dict
    status: str = "queued"  # queued | running | done | failed
    error: str | None = None
    result: GridResult | None = None


@dataclass
class SessionState:
    """All mutable service state; guarded by a single lock."""

    output_dir: str | None = None
    datasets: dict = field(default_factory=dict)
    runs: dict = field(default_factory=dict)
    report: ReportTable = field(default_factory=ReportTable)
    curves: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    counter: int = 0

    def next_id(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}-{self.counter}"


def _json_response(payload: str) -> Response:
    return Response(content=payload, media_type="application/json")


def create_app(output_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="exprclust")
    # single-user research tool; the browser studio may be served from
    # another local origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state = SessionState(output_dir=output_dir)
    # one grid run at a time; further submissions queue
    executor = ThreadPoolExecutor(max_workers=1)
    app.state.session = state

    @app.post("/datasets")
    async def upload_dataset(
        file: UploadFile = File(...),
        class_column: int | None = Form(None),
        top_n: str | None = Form(None),
        normalize: bool = Form(False),
    ):
        text = (await file.read()).decode("utf-8", errors="replace")
        try:
            matrix = parse_matrix(text, class_column=class_column)
            n = None if top_n in (None, "", "all") else int(top_n)
            cfg = PreprocessConfig(
                top_n="all" if n is None else n,
                normalize=normalize,
                class_column=class_column,
            )
            matrix = preprocess(matrix, cfg)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with state.lock:
            ds_id = state.next_id("ds")
            state.datasets[ds_id] = matrix
        return {
            "id": ds_id,
            "rows": matrix.n_genes,
            "cols": matrix.n_conditions,
            "has_true_labels": matrix.true_labels is not None,
            "gene_ids": matrix.gene_ids,
            "condition_ids": matrix.condition_ids,
        }

    @app.get("/datasets/{ds_id}")
    def dataset_info(ds_id: str):
        matrix = state.datasets.get(ds_id)
        if matrix is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {ds_id!r}")
        return {
            "id": ds_id,
            "rows": matrix.n_genes,
            "cols": matrix.n_conditions,
            "has_true_labels": matrix.true_labels is not None,
        }

    def _execute(run: RunRecord, data: ExpressionMatrix, spec):
        with state.lock:
            run.status = "running"
        try:
            result = run_grid(data, spec)
        except Exception as exc:  # surfaced via run status
            with state.lock:
                run.status = "failed"
                run.error = str(exc)
            return
        with state.lock:
            run.result = result
            run.status = "done"
            state.report.merge(result.report)
            state.curves.extend(result.curves)

    @app.post("/runs")
    def submit_run(payload: dict):
        ds_id = payload.get("dataset_id")
        data = state.datasets.get(ds_id)
        if data is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {ds_id!r}")
        try:
            spec = grid_spec_from_json(payload)
            spec.validate(data.n_genes)
        except GridSpecError as exc:
            raise HTTPException(
                status_code=400,
                detail={"errors": [{"field": exc.field, "message": str(exc)}]},
            )
        if spec.external_indices and data.true_labels is None:
            raise HTTPException(
                status_code=409,
                detail="external indices require a dataset with true labels",
            )
        if spec.output_dir is None and state.output_dir is not None:
            spec = grid_spec_from_json({**payload, "output_dir": state.output_dir})
        with state.lock:
            run_id = state.next_id("run")
            run = RunRecord(run_id, ds_id, payload)
            state.runs[run_id] = run
        executor.submit(_execute, run, data, spec)
        return {"id": run_id, "status": "queued"}

    def _get_run(run_id: str) -> RunRecord:
        run = state.runs.get(run_id)
        if run is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        return run

    @app.get("/runs/{run_id}")
    def run_status(run_id: str, timings: bool = True):
        run = _get_run(run_id)
        out = {"id": run.run_id, "status": run.status, "dataset_id": run.dataset_id}
        if run.error:
            out["error"] = run.error
        if run.result is not None:
            out["report"] = run.result.report.to_json(include_timings=timings)
            out["curves"] = [c.to_json() for c in run.result.curves]
        return out

    @app.get("/runs/{run_id}/labels/{algorithm}")
    def run_labels(run_id: str, algorithm: str):
        run = _get_run(run_id)
        if run.result is None or algorithm not in run.result.best_labels:
            raise HTTPException(
                status_code=404, detail=f"no labels for {algorithm!r} in run {run_id!r}"
            )
        labels = run.result.best_labels[algorithm]
        return {"algorithm": algorithm, "labels": [int(v) for v in labels]}

    @app.get("/runs/{run_id}/render")
    def run_render(run_id: str, kind: str, algorithm: str | None = None):
        run = _get_run(run_id)
        if run.result is None:
            raise HTTPException(status_code=404, detail=f"run {run_id!r} has no results yet")
        data = state.datasets[run.dataset_id]
        if kind == "index_curve":
            curves = run.result.curves
            if algorithm is not None:
                curves = [c for c in curves if c.algorithm == algorithm]
            if not curves:
                raise HTTPException(status_code=404, detail="no matching curves")
            svg = render_index_curves(curves)
        elif kind in ("heatmap", "profile"):
            if algorithm is None or algorithm not in run.result.best_labels:
                raise HTTPException(
                    status_code=404, detail=f"no labels for {algorithm!r} in run {run_id!r}"
                )
            labels = run.result.best_labels[algorithm]
            svg = (
                render_heatmap(data, labels)
                if kind == "heatmap"
                else render_profile(data, labels)
            )
        else:
            raise HTTPException(
                status_code=400,
                detail={"errors": [{"field": "kind", "message": f"unknown render kind {kind!r}"}]},
            )
        return PlainTextResponse(content=svg, media_type="image/svg+xml")

    @app.get("/curves")
    def session_curves():
        with state.lock:
            return {"curves": [c.to_json() for c in state.curves]}

    @app.get("/curves/render")
    def session_curves_render():
        with state.lock:
            curves = list(state.curves)
        if not curves:
            raise HTTPException(status_code=404, detail="no accumulated curves")
        return PlainTextResponse(content=render_index_curves(curves), media_type="image/svg+xml")

    @app.post("/session/refresh")
    def refresh():
        with state.lock:
            cleared = len(state.curves)
            state.curves.clear()
        return {"curves_cleared": cleared}

    @app.get("/report")
    def report(timings: bool = True):
        with state.lock:
            payload = report_json_text(state.report, include_timings=timings)
        return _json_response(payload)

    return app


app = create_app()
