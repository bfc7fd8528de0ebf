"""Request/response schemas shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class SegmentModel(BaseModel):
    start_ms: int = Field(ge=0)
    end_ms: int = Field(ge=0)
    text: str


class ParseRequest(BaseModel):
    content: str
    format: Literal["auto", "srt", "console"] = "auto"
    label: str = ""
    crlf: bool = False


class ParseResponse(BaseModel):
    detected_format: Literal["srt", "console"]
    segments: list[SegmentModel]
    skipped: int
    srt: str


class PairingEntryModel(BaseModel):
    ref_index: int = Field(ge=0)
    hyp_index: int | None = None
    hyp_text: str | None = None
    label: str = ""
    side: Literal["a", "b"] = "a"
    note: str = ""


class AnnotationModel(BaseModel):
    pair_label: str
    diff_index: int = Field(ge=0)
    kind: Literal["hallucination", "mishearing"]
    distance_override: float | None = None
    note: str = ""


class StatedTallyModel(BaseModel):
    wins_a: int | None = None
    wins_b: int | None = None
    draws: int | None = None


class EvaluateRequest(BaseModel):
    reference: str
    hyp_a: str | None = None
    hyp_b: str | None = None
    hyp_format: Literal["auto", "srt", "console"] = "auto"
    pairs: list[PairingEntryModel] | None = None
    annotations: list[AnnotationModel] = Field(default_factory=list)
    label_a: str = "A"
    label_b: str = "B"
    phoneme_pairs: str = "bp,td"
    threshold: float = Field(default=0.5, gt=0, le=1)
    stated_tally: StatedTallyModel | None = None
    stamp: bool = False


class EvaluateResponse(BaseModel):
    report: dict
    table: str


class DiagnosticsModel(BaseModel):
    iterations: int
    converged: bool
    component_correlation: float
    note: str = ""


class SeparateRequest(BaseModel):
    wav_base64: str
    method: Literal["center", "ica"] = "center"
    max_iter: int = Field(default=200, ge=1)
    tol: float = Field(default=1e-4, gt=0)
    seed: int = 0
    contrast: Literal["logcosh", "cube"] = "logcosh"
    rescale: Literal["peak", "gain100"] = "peak"


class SeparateResponse(BaseModel):
    method: str
    vocals_wav_base64: str
    instrumental_wav_base64: str
    diagnostics: DiagnosticsModel


class SpectrogramRequest(BaseModel):
    wav_base64: str
    nfft: int = 256
    hop: int = 128
    window: Literal["hann", "rect"] = "hann"


class SpectrogramResponse(BaseModel):
    frame_count: int
    bin_count: int
    csv: str
    pgm_base64: str


class AnalyzeRequest(BaseModel):
    wav_base64: str
    scale: Literal["linear", "log"] = "linear"
    nfft: int = 256
    hop: int = 128
    window: Literal["hann", "rect"] = "hann"


class AnalyzeResponse(BaseModel):
    scale: str
    frequencies: list[float]
    magnitudes_db: list[float]
    csv: str
