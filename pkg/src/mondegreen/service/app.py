"""FastAPI application exposing the operation layer."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import MondegreenError
from . import models, ops

app = FastAPI(
    title="mondegreen",
    version=__version__,
    description=(
        "Lyric-transcript comparison and stereo separation service: parse "
        "SRT/console transcripts, score two hypotheses against reference "
        "lyrics, split vocals from instrumentals, and compute spectra."
    ),
)


@app.exception_handler(MondegreenError)
@app.exception_handler(ValueError)
async def _input_error(_request: Request, exc: Exception) -> JSONResponse:
    # domain errors and value checks that pydantic's typing can't express
    # (e.g. nfft must be a power of two) are the caller's problem, not ours
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/parse", response_model=models.ParseResponse)
def parse(req: models.ParseRequest) -> models.ParseResponse:
    return ops.run_parse(req)


@app.post("/evaluate", response_model=models.EvaluateResponse)
def evaluate(req: models.EvaluateRequest) -> models.EvaluateResponse:
    return ops.run_evaluate(req)


@app.post("/separate", response_model=models.SeparateResponse)
def separate(req: models.SeparateRequest) -> models.SeparateResponse:
    return ops.run_separate(req)


@app.post("/spectrogram", response_model=models.SpectrogramResponse)
def spectrogram(req: models.SpectrogramRequest) -> models.SpectrogramResponse:
    return ops.run_spectrogram(req)


@app.post("/analyze", response_model=models.AnalyzeResponse)
def analyze(req: models.AnalyzeRequest) -> models.AnalyzeResponse:
    return ops.run_analyze(req)
