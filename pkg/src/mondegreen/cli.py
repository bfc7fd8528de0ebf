"""Command-line front end.

Each subcommand builds a request model and hands it to the operation layer —
in-process by default, or POSTed to a running service when --server is
given, so local and remote runs produce identical results.

Exit codes: 0 success, 1 bad input or usage, 2 I/O trouble (missing files,
unwritable outputs, unreachable server). Diagnostics go to stderr; payload
output (SRT text, report tables, CSV) goes to stdout unless routed to files.
Every flag can also be supplied via a JSON --config file; explicit flags win
over config values.
"""

from __future__ import annotations

import argparse
import base64
import json
import sys
from pathlib import Path
from types import SimpleNamespace

import httpx
import pydantic

from .errors import MondegreenError
from .service import models, ops

_DEFAULTS: dict[str, dict] = {
    "parse": {"server": None, "format": "auto", "label": "", "crlf": False, "out": None},
    "evaluate": {
        "server": None,
        "hyp_a": None,
        "hyp_b": None,
        "hyp_format": "auto",
        "pairs": None,
        "annotations": None,
        "label_a": "A",
        "label_b": "B",
        "phoneme_pairs": "bp,td",
        "threshold": 0.5,
        "stated_tally": None,
        "out": None,
        "stamp": False,
    },
    "separate": {
        "server": None,
        "method": "center",
        "out_dir": ".",
        "max_iter": 200,
        "tol": 1e-4,
        "seed": 0,
        "contrast": "logcosh",
        "rescale": "peak",
    },
    "spectrogram": {
        "server": None,
        "nfft": 256,
        "hop": 128,
        "window": "hann",
        "csv": None,
        "pgm": None,
    },
    "analyze": {
        "server": None,
        "scale": "linear",
        "nfft": 256,
        "hop": 128,
        "window": "hann",
        "out": None,
    },
    "serve": {"server": None, "host": "127.0.0.1", "port": 8000},
}

S = argparse.SUPPRESS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, metavar="JSON",
                        help="JSON file of option defaults; explicit flags win")
    common.add_argument("--server", default=S, metavar="URL",
                        help="send the request to a running service instead of running locally")

    parser = argparse.ArgumentParser(
        prog="mondegreen",
        description="Compare ASR lyric transcripts and separate stereo vocals.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("parse", parents=[common],
                       help="convert an SRT file or ASR console log to clean SRT")
    p.add_argument("input", help="transcript file, or - for stdin")
    p.add_argument("--format", choices=["auto", "srt", "console"], default=S)
    p.add_argument("--label", default=S, help="source label recorded on the transcript")
    p.add_argument("--crlf", action="store_true", default=S, help="emit CRLF line endings")
    p.add_argument("-o", "--out", default=S, help="write SRT here instead of stdout")

    p = sub.add_parser("evaluate", parents=[common],
                       help="score two hypothesis transcripts against reference lyrics")
    p.add_argument("--ref", required=True, help="reference lyrics, one line per lyric line")
    p.add_argument("--hyp-a", dest="hyp_a", default=S, help="hypothesis A transcript (SRT or console log)")
    p.add_argument("--hyp-b", dest="hyp_b", default=S, help="hypothesis B transcript (SRT or console log)")
    p.add_argument("--hyp-format", dest="hyp_format", choices=["auto", "srt", "console"], default=S)
    p.add_argument("--pairs", default=S, help="JSON pairing spec; omit to auto-pair")
    p.add_argument("--annotations", default=S, help="JSON manual-annotation file")
    p.add_argument("--label-a", dest="label_a", default=S)
    p.add_argument("--label-b", dest="label_b", default=S)
    p.add_argument("--phoneme-pairs", dest="phoneme_pairs", default=S,
                   help="confusion pairs like 'bp,td'; empty string disables halving")
    p.add_argument("--threshold", type=float, default=S,
                   help="substitution hallucination threshold in (0, 1]")
    p.add_argument("--stated-tally", dest="stated_tally", default=S, metavar="A,B[,D]",
                   help="externally claimed tally to cross-check against computed verdicts")
    p.add_argument("-o", "--out", default=S, help="write the JSON report here")
    p.add_argument("--stamp", action="store_true", default=S,
                   help="include a generation timestamp in the report")

    p = sub.add_parser("separate", parents=[common],
                       help="split a stereo WAV into vocal and instrumental estimates")
    p.add_argument("input", help="stereo 16-bit PCM WAV file")
    p.add_argument("--method", choices=["center", "ica"], default=S)
    p.add_argument("--out-dir", dest="out_dir", default=S,
                   help="directory for vocals.wav, instrumental.wav, diagnostics.json")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--contrast", choices=["logcosh", "cube"], default=S)
    p.add_argument("--rescale", choices=["peak", "gain100"], default=S)

    p = sub.add_parser("spectrogram", parents=[common],
                       help="render a time/frequency magnitude grid from a WAV")
    p.add_argument("input", help="16-bit PCM WAV file (stereo is downmixed)")
    p.add_argument("--nfft", type=int, default=S)
    p.add_argument("--hop", type=int, default=S)
    p.add_argument("--window", choices=["hann", "rect"], default=S)
    p.add_argument("--csv", default=S, help="write the grid as CSV here")
    p.add_argument("--pgm", default=S, help="write the grid as a binary PGM image here")

    p = sub.add_parser("analyze", parents=[common],
                       help="average frequency spectrum of a WAV")
    p.add_argument("input", help="16-bit PCM WAV file (stereo is downmixed)")
    p.add_argument("--scale", choices=["linear", "log"], default=S)
    p.add_argument("--nfft", type=int, default=S)
    p.add_argument("--hop", type=int, default=S)
    p.add_argument("--window", choices=["hann", "rect"], default=S)
    p.add_argument("-o", "--out", default=S, help="write CSV here instead of stdout")

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default=S)
    p.add_argument("--port", type=int, default=S)

    return parser


def _merge_options(ns: argparse.Namespace) -> SimpleNamespace:
    defaults = _DEFAULTS[ns.cmd]
    config = {}
    if ns.config is not None:
        config = json.loads(Path(ns.config).read_text("utf-8"))
        if not isinstance(config, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(config) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys for {ns.cmd!r}: {sorted(unknown)}")
    merged = {**defaults, **config}
    for key, value in vars(ns).items():
        if key not in ("cmd", "config", "func"):
            merged[key] = value
    return SimpleNamespace(**merged)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text("utf-8")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, "utf-8")


def _load_json(path: str):
    return json.loads(Path(path).read_text("utf-8"))


_LOCAL = {
    "/parse": ops.run_parse,
    "/evaluate": ops.run_evaluate,
    "/separate": ops.run_separate,
    "/spectrogram": ops.run_spectrogram,
    "/analyze": ops.run_analyze,
}


def _call(opts: SimpleNamespace, path: str, request, response_cls):
    if opts.server:
        url = opts.server.rstrip("/") + path
        reply = httpx.post(url, json=request.model_dump(), timeout=600.0)
        if reply.status_code == 422:
            detail = reply.json().get("detail", reply.text)
            if not isinstance(detail, str):
                detail = json.dumps(detail)
            raise MondegreenError(f"server rejected the request: {detail}")
        if reply.status_code != 200:
            raise httpx.HTTPStatusError(
                f"server returned {reply.status_code}", request=reply.request, response=reply
            )
        return response_cls.model_validate(reply.json())
    return _LOCAL[path](request)


def _cmd_parse(opts: SimpleNamespace) -> int:
    req = models.ParseRequest(
        content=_read_text(opts.input), format=opts.format, label=opts.label, crlf=opts.crlf
    )
    resp = _call(opts, "/parse", req, models.ParseResponse)
    _write_text(opts.out, resp.srt)
    print(
        f"{len(resp.segments)} segments ({resp.detected_format}), "
        f"{resp.skipped} lines skipped",
        file=sys.stderr,
    )
    return 0


def _parse_stated_tally(text: str) -> models.StatedTallyModel:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError("--stated-tally expects 'winsA,winsB' or 'winsA,winsB,draws'")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"--stated-tally values must be integers, got {text!r}") from None
    return models.StatedTallyModel(
        wins_a=nums[0], wins_b=nums[1], draws=nums[2] if len(nums) == 3 else None
    )


def _cmd_evaluate(opts: SimpleNamespace) -> int:
    req = models.EvaluateRequest(
        reference=_read_text(opts.ref),
        hyp_a=_read_text(opts.hyp_a) if opts.hyp_a else None,
        hyp_b=_read_text(opts.hyp_b) if opts.hyp_b else None,
        hyp_format=opts.hyp_format,
        pairs=_load_json(opts.pairs) if opts.pairs else None,
        annotations=_load_json(opts.annotations) if opts.annotations else [],
        label_a=opts.label_a,
        label_b=opts.label_b,
        phoneme_pairs=opts.phoneme_pairs,
        threshold=opts.threshold,
        stated_tally=_parse_stated_tally(opts.stated_tally) if opts.stated_tally else None,
        stamp=opts.stamp,
    )
    resp = _call(opts, "/evaluate", req, models.EvaluateResponse)
    if opts.out:
        _write_text(opts.out, json.dumps(resp.report, ensure_ascii=False, indent=2) + "\n")
    sys.stdout.write(resp.table)
    return 0


def _cmd_separate(opts: SimpleNamespace) -> int:
    req = models.SeparateRequest(
        wav_base64=base64.b64encode(Path(opts.input).read_bytes()).decode("ascii"),
        method=opts.method,
        max_iter=opts.max_iter,
        tol=opts.tol,
        seed=opts.seed,
        contrast=opts.contrast,
        rescale=opts.rescale,
    )
    resp = _call(opts, "/separate", req, models.SeparateResponse)
    out_dir = Path(opts.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "vocals.wav").write_bytes(base64.b64decode(resp.vocals_wav_base64))
    (out_dir / "instrumental.wav").write_bytes(base64.b64decode(resp.instrumental_wav_base64))
    diagnostics = {"method": resp.method, **resp.diagnostics.model_dump()}
    (out_dir / "diagnostics.json").write_text(
        json.dumps(diagnostics, ensure_ascii=False, indent=2) + "\n", "utf-8"
    )
    d = resp.diagnostics
    print(
        f"{resp.method}: iterations {d.iterations}, converged {d.converged}, "
        f"component correlation {d.component_correlation:.4f}",
        file=sys.stderr,
    )
    print(f"wrote vocals.wav, instrumental.wav, diagnostics.json to {out_dir}", file=sys.stderr)
    return 0


def _cmd_spectrogram(opts: SimpleNamespace) -> int:
    if not opts.csv and not opts.pgm:
        raise MondegreenError("spectrogram needs --csv and/or --pgm output paths")
    req = models.SpectrogramRequest(
        wav_base64=base64.b64encode(Path(opts.input).read_bytes()).decode("ascii"),
        nfft=opts.nfft,
        hop=opts.hop,
        window=opts.window,
    )
    resp = _call(opts, "/spectrogram", req, models.SpectrogramResponse)
    if opts.csv:
        _write_text(opts.csv, resp.csv)
    if opts.pgm:
        Path(opts.pgm).write_bytes(base64.b64decode(resp.pgm_base64))
    print(f"{resp.frame_count} frames x {resp.bin_count} bins", file=sys.stderr)
    return 0


def _cmd_analyze(opts: SimpleNamespace) -> int:
    req = models.AnalyzeRequest(
        wav_base64=base64.b64encode(Path(opts.input).read_bytes()).decode("ascii"),
        scale=opts.scale,
        nfft=opts.nfft,
        hop=opts.hop,
        window=opts.window,
    )
    resp = _call(opts, "/analyze", req, models.AnalyzeResponse)
    _write_text(opts.out, resp.csv)
    return 0


def _cmd_serve(opts: SimpleNamespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=opts.host, port=opts.port)
    return 0


_HANDLERS = {
    "parse": _cmd_parse,
    "evaluate": _cmd_evaluate,
    "separate": _cmd_separate,
    "spectrogram": _cmd_spectrogram,
    "analyze": _cmd_analyze,
    "serve": _cmd_serve,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; fold the latter
        # into the generic bad-input code
        return 0 if exc.code in (0, None) else 1
    try:
        opts = _merge_options(ns)
        return _HANDLERS[ns.cmd](opts)
    except (MondegreenError, pydantic.ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
