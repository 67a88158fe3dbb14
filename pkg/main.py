from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from qtembed.cli import run_embed, run_faces, run_quadrics, run_validate
from qtembed.config import get_settings
from qtembed.document import InputDocument
from qtembed.embed import EmbeddingDescription
from qtembed.errors import InputDocumentError, QtembedError
from qtembed.logs import configure_logging
from qtembed.reports import FacesReport, QuadricsReport, ReportBundle

settings = get_settings()
configure_logging(settings.log_level, settings.log_json)

app = FastAPI()


class EmbedRequest(BaseModel):
    document: InputDocument
    mode: str | None = None
    character: str | None = None


def _unprocessable(exc: QtembedError) -> HTTPException:
    status = 400 if isinstance(exc, InputDocumentError) else 422
    return HTTPException(status_code=status, detail=str(exc))


@app.get("/")
def read_root():
    return {"message": "qtembed API"}


@app.get("/health")
def health():
    return {"status": "healthy"}


@app.post("/validate", response_model=ReportBundle)
def validate(document: InputDocument):
    try:
        return run_validate(document)
    except QtembedError as exc:
        raise _unprocessable(exc) from exc


@app.post("/faces", response_model=FacesReport)
def faces(document: InputDocument):
    try:
        return run_faces(document)
    except QtembedError as exc:
        raise _unprocessable(exc) from exc


@app.post("/quadrics", response_model=QuadricsReport)
def quadrics(document: InputDocument):
    try:
        return run_quadrics(document)
    except QtembedError as exc:
        raise _unprocessable(exc) from exc


@app.post("/embed", response_model=EmbeddingDescription)
def embed(request: EmbedRequest):
    if request.mode not in (None, "affine", "projective"):
        raise HTTPException(status_code=400, detail=f"unknown mode {request.mode!r}")
    try:
        return run_embed(request.document, request.mode, request.character)
    except QtembedError as exc:
        raise _unprocessable(exc) from exc
