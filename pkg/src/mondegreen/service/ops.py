"""Operation layer: one function per service endpoint, over the model types.

Everything here is pure input -> output; HTTP specifics live in ``app`` and
file handling in the CLI. Input problems surface as MondegreenError
subclasses (or pydantic validation upstream), never as exit codes or HTTP
statuses.
"""

from __future__ import annotations

import base64
import binascii
import datetime as _dt

from .. import judging, separation, spectrum, textnorm
from ..audio import AudioBuffer, MonoSignal, downmix, read_wav, write_wav
from ..distances import parse_phoneme_pairs
from ..errors import PairingError, WavFormatError
from ..subtitles import (
    CONSOLE_LINE,
    Transcript,
    emit_srt,
    parse_console_log,
    parse_reference,
    parse_srt,
)
from . import models


def detect_format(content: str) -> str:
    """Console output if any line matches the bracket-timestamp shape, else SRT."""
    for line in content.splitlines():
        if CONSOLE_LINE.match(line):
            return "console"
    return "srt"


def _parse_transcript(content: str, fmt: str, label: str = "") -> tuple[Transcript, int, str]:
    fmt = detect_format(content) if fmt == "auto" else fmt
    if fmt == "console":
        transcript, skipped = parse_console_log(content, label)
    else:
        transcript, skipped = parse_srt(content, label), 0
    return transcript, skipped, fmt


def run_parse(req: models.ParseRequest) -> models.ParseResponse:
    transcript, skipped, fmt = _parse_transcript(req.content, req.format, req.label)
    return models.ParseResponse(
        detected_format=fmt,
        segments=[
            models.SegmentModel(start_ms=s.start_ms, end_ms=s.end_ms, text=s.text)
            for s in transcript.segments
        ],
        skipped=skipped,
        srt=emit_srt(transcript, newline="\r\n" if req.crlf else "\n"),
    )


def _side_pairs(
    ref_lines: list[str],
    entries: list[textnorm.PairingEntry],
    side: str,
    hyp_doc: str | None,
    hyp_format: str,
    label: str,
) -> list[textnorm.LyricPair]:
    chosen = [e for e in entries if e.side == side]
    needs_transcript = any(e.hyp_index is not None for e in chosen)
    transcript = None
    if needs_transcript:
        if hyp_doc is None:
            raise PairingError(
                f"side {side!r} pairs use hyp_index but no hypothesis document was given"
            )
        transcript, _, _ = _parse_transcript(hyp_doc, hyp_format, label)
    return textnorm.pair_lyrics(ref_lines, transcript, chosen)


def run_evaluate(req: models.EvaluateRequest) -> models.EvaluateResponse:
    ref_lines = parse_reference(req.reference)
    if not ref_lines:
        raise PairingError("reference document has no lines")
    phoneme_pairs = parse_phoneme_pairs(req.phoneme_pairs)

    if req.pairs is not None:
        entries = [textnorm.PairingEntry(**p.model_dump()) for p in req.pairs]
        pairs_a = _side_pairs(ref_lines, entries, "a", req.hyp_a, req.hyp_format, req.label_a)
        pairs_b = _side_pairs(ref_lines, entries, "b", req.hyp_b, req.hyp_format, req.label_b)
    else:
        if req.hyp_a is None or req.hyp_b is None:
            raise PairingError("auto pairing needs both hypothesis documents")
        ta, _, _ = _parse_transcript(req.hyp_a, req.hyp_format, req.label_a)
        tb, _, _ = _parse_transcript(req.hyp_b, req.hyp_format, req.label_b)
        pairs_a, unpaired_a = textnorm.auto_pair(ref_lines, ta, req.label_a)
        pairs_b, unpaired_b = textnorm.auto_pair(ref_lines, tb, req.label_b)
        if unpaired_a or unpaired_b:
            # keep both sides on the shared subset of reference lines
            got_a = {p.reference.original for p in pairs_a}
            got_b = {p.reference.original for p in pairs_b}
            pairs_a = [p for p in pairs_a if p.reference.original in got_b]
            pairs_b = [p for p in pairs_b if p.reference.original in got_a]

    annotations = [judging.Annotation(
        pair_label=a.pair_label,
        diff_index=a.diff_index,
        kind=judging.Kind(a.kind),
        distance_override=a.distance_override,
        note=a.note,
    ) for a in req.annotations]

    results, tally = judging.evaluate_pairs(
        pairs_a, pairs_b, annotations, phoneme_pairs, req.threshold
    )
    stated = req.stated_tally.model_dump() if req.stated_tally is not None else None
    generated_at = (
        _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        if req.stamp
        else None
    )
    report = judging.build_report(
        results,
        tally,
        label_a=req.label_a,
        label_b=req.label_b,
        phoneme_pairs=phoneme_pairs,
        threshold=req.threshold,
        stated_tally=stated,
        generated_at=generated_at,
    )
    return models.EvaluateResponse(report=report, table=judging.format_table(report))


def _decode_wav(b64: str) -> AudioBuffer:
    try:
        raw = base64.b64decode(b64, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise WavFormatError(f"wav_base64 is not valid base64: {exc}") from None
    return read_wav(raw)


def _encode_wav(buf: AudioBuffer) -> str:
    return base64.b64encode(write_wav(buf)).decode("ascii")


def _mono_buffer(sig) -> AudioBuffer:
    return AudioBuffer(sig.sample_rate, [sig.samples])


def run_separate(req: models.SeparateRequest) -> models.SeparateResponse:
    buf = _decode_wav(req.wav_base64)
    if req.method == "center":
        result = separation.cancel_center(buf)
    else:
        result = separation.fastica2(
            buf,
            max_iter=req.max_iter,
            tol=req.tol,
            seed=req.seed,
            contrast=req.contrast,
            rescale=req.rescale,
        )
    return models.SeparateResponse(
        method=result.method,
        vocals_wav_base64=_encode_wav(_mono_buffer(result.vocals_est)),
        instrumental_wav_base64=_encode_wav(_mono_buffer(result.instrumental_est)),
        diagnostics=models.DiagnosticsModel(
            iterations=result.diagnostics.iterations,
            converged=result.diagnostics.converged,
            component_correlation=result.diagnostics.component_correlation,
            note=result.diagnostics.note,
        ),
    )


def _as_mono(buf: AudioBuffer) -> MonoSignal:
    # stereo input is downmixed for single-signal analyses
    if buf.n_channels == 2:
        return downmix(buf)
    return MonoSignal(buf.sample_rate, buf.channels[0])


def run_spectrogram(req: models.SpectrogramRequest) -> models.SpectrogramResponse:
    sig = _as_mono(_decode_wav(req.wav_base64))
    grid = spectrum.spectrogram(sig, nfft=req.nfft, hop=req.hop, window=req.window)
    return models.SpectrogramResponse(
        frame_count=grid.frame_count,
        bin_count=grid.bin_count,
        csv=spectrum.export_grid(grid, "csv").decode("ascii"),
        pgm_base64=base64.b64encode(spectrum.export_grid(grid, "pgm")).decode("ascii"),
    )


def run_analyze(req: models.AnalyzeRequest) -> models.AnalyzeResponse:
    sig = _as_mono(_decode_wav(req.wav_base64))
    curve = spectrum.frequency_analysis(
        sig, scale=req.scale, nfft=req.nfft, hop=req.hop, window=req.window
    )
    return models.AnalyzeResponse(
        scale=curve.scale,
        frequencies=[float(f) for f in curve.frequencies],
        magnitudes_db=[float(m) for m in curve.magnitudes_db],
        csv=spectrum.export_grid(curve, "csv").decode("ascii"),
    )
