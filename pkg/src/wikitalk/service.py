"""HTTP service backing the annotation interface.

All bodies are JSON. Reports delegate to the functions in
wikitalk.annotation so an endpoint can never drift from its operation.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Mapping

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .annotation import (
    Addressee,
    Alignment,
    AnnotationStore,
    EmptyReportError,
    NoOverlapError,
    NotInSampleError,
    Objective,
    agreement,
    alignment_distribution,
    new_annotation,
    objective_distribution,
    targeted_rate,
)
from .model import FlatThread, third_arrival_rank


class AnnotationIn(BaseModel):
    thread_id: str
    annotator_id: str
    addressee: Addressee
    alignment: Alignment
    objective: Objective
    note: str | None = None


def flat_thread_view(ft: FlatThread) -> dict:
    """Wire form of a flattened thread for the annotation UI."""
    c_rank = third_arrival_rank(ft)
    return {
        "thread_id": ft.thread_id,
        "title": ft.title,
        "source_page": ft.source_page,
        "schema": ft.schema,
        "c_first_rank": c_rank,
        "participants": [
            {"letter": p.letter, "author_id": p.author_id, "arrival_rank": p.arrival_rank}
            for p in ft.participants
        ],
        "messages": [
            {
                "rank": m.rank,
                "letter": ft.schema[m.rank - 1],
                "author_id": m.author_id,
                "author_kind": m.author_kind,
                "timestamp": m.timestamp.isoformat() if m.timestamp else None,
                "indent_depth": m.indent_depth,
                "text": m.text,
                "word_count": m.word_count,
                "is_c_first": m.rank == c_rank,
            }
            for m in ft.messages
        ],
    }


def build_app(
    store: AnnotationStore,
    corpus: Mapping[str, FlatThread],
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="wikitalk annotation service")

    @app.get("/api/samples")
    def list_samples():
        return {"samples": [s.to_record() for s in store.samples()]}

    @app.get("/api/samples/{name}")
    def get_sample(name: str):
        try:
            return store.sample(name).to_record()
        except NotInSampleError:
            raise HTTPException(status_code=404, detail=f"unknown sample {name!r}")

    @app.get("/api/samples/{name}/progress")
    def sample_progress(name: str, annotator: str):
        try:
            sample = store.sample(name)
        except NotInSampleError:
            raise HTTPException(status_code=404, detail=f"unknown sample {name!r}")
        done = {a.thread_id for a in store.annotations(sample=name, annotator=annotator)}
        remaining = [tid for tid in sample.thread_ids if tid not in done]
        return {
            "sample": name,
            "annotator": annotator,
            "total": len(sample.thread_ids),
            "done": len(sample.thread_ids) - len(remaining),
            "remaining_ids": remaining,
        }

    @app.get("/api/threads/{thread_id:path}")
    def get_thread(thread_id: str):
        ft = corpus.get(thread_id)
        if ft is None:
            raise HTTPException(status_code=404, detail=f"unknown thread {thread_id!r}")
        return flat_thread_view(ft)

    @app.post("/api/annotations")
    def post_annotation(body: AnnotationIn):
        ann = new_annotation(
            thread_id=body.thread_id,
            annotator_id=body.annotator_id,
            addressee=body.addressee,
            alignment=body.alignment,
            objective=body.objective,
            note=body.note,
        )
        try:
            stored, warnings = store.record(ann)
        except NotInSampleError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"annotation": stored.to_record(), "warnings": warnings}

    @app.get("/api/annotations")
    def list_annotations(sample: str | None = None, annotator: str | None = None):
        try:
            anns = store.annotations(sample=sample, annotator=annotator)
        except NotInSampleError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"annotations": [a.to_record() for a in anns]}

    def _report(fn, sample: str):
        try:
            return fn(store, sample)
        except NotInSampleError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (EmptyReportError, NoOverlapError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/reports/alignment")
    def report_alignment(sample: str):
        return asdict(_report(alignment_distribution, sample))

    @app.get("/api/reports/objective")
    def report_objective(sample: str):
        return asdict(_report(objective_distribution, sample))

    @app.get("/api/reports/targeted")
    def report_targeted(sample: str):
        return {"sample": sample, "targeted_rate": _report(targeted_rate, sample)}

    @app.get("/api/reports/agreement")
    def report_agreement(sample: str):
        return asdict(_report(agreement, sample))

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def serve(
    store: AnnotationStore,
    corpus: Mapping[str, FlatThread],
    bind_address: str = "127.0.0.1:8000",
    static_dir: str | None = None,
) -> None:
    """Run the annotation service until interrupted."""
    import uvicorn

    host, _, port = bind_address.partition(":")
    uvicorn.run(
        build_app(store, corpus, static_dir=static_dir),
        host=host or "127.0.0.1",
        port=int(port or "8000"),
        log_level="info",
    )
