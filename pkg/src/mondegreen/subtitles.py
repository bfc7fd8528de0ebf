"""SubRip (.srt) and ASR console-log parsing, plus SRT emission.

Timestamps live as integer milliseconds end to end, so parse -> emit ->
parse is lossless. SRT timestamps accept both the standard comma and a dot
before the milliseconds; emission always writes the comma form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import SubtitleParseError

_SRT_TIME = re.compile(r"^(\d+):(\d{1,2}):(\d{1,2})[,.](\d{3})$")
CONSOLE_LINE = re.compile(r"^\[(\d+):(\d{2})\.(\d{3}) --> (\d+):(\d{2})\.(\d{3})\]\s(.*)$")


def parse_timestamp(text: str) -> int:
    """``HH:MM:SS,mmm`` (or ``.mmm``) to milliseconds."""
    m = _SRT_TIME.match(text.strip())
    if not m:
        raise SubtitleParseError(f"bad timestamp {text.strip()!r}")
    h, mi, s, ms = (int(g) for g in m.groups())
    if mi > 59 or s > 59:
        raise SubtitleParseError(f"bad timestamp {text.strip()!r}")
    return ((h * 60 + mi) * 60 + s) * 1000 + ms


def format_timestamp(ms: int) -> str:
    if ms < 0:
        raise ValueError("timestamps cannot be negative")
    s, ms = divmod(ms, 1000)
    mi, s = divmod(s, 60)
    h, mi = divmod(mi, 60)
    return f"{h:02d}:{mi:02d}:{s:02d},{ms:03d}"


@dataclass(frozen=True)
class Segment:
    start_ms: int
    end_ms: int
    text: str


@dataclass
class Transcript:
    source_label: str = ""
    segments: list[Segment] = field(default_factory=list)


def parse_srt(text: str, label: str = "") -> Transcript:
    """Parse standard SRT cues.

    Cue indices are ignored (order is kept), multi-line cue text is joined
    with single spaces, and cues whose text is empty are dropped. Errors
    carry 1-based line numbers.
    """
    lines = text.lstrip("﻿").replace("\r\n", "\n").replace("\r", "\n").split("\n")
    segments = []
    i, n = 0, len(lines)
    while i < n:
        if not lines[i].strip():
            i += 1
            continue
        if lines[i].strip().isdigit() and i + 1 < n and "-->" in lines[i + 1]:
            i += 1  # cue counter line
        if "-->" not in lines[i]:
            raise SubtitleParseError(
                f"line {i + 1}: expected a timestamp line, got {lines[i]!r}"
            )
        left, _, right = lines[i].partition("-->")
        try:
            start = parse_timestamp(left)
            end = parse_timestamp(right)
        except SubtitleParseError as exc:
            raise SubtitleParseError(f"line {i + 1}: {exc}") from None
        if end < start:
            raise SubtitleParseError(f"line {i + 1}: cue ends before it starts")
        i += 1
        texts = []
        while i < n and lines[i].strip():
            texts.append(lines[i].strip())
            i += 1
        joined = " ".join(texts).strip()
        if joined:
            segments.append(Segment(start, end, joined))
    return Transcript(source_label=label, segments=segments)


def parse_console_log(text: str, label: str = "") -> tuple[Transcript, int]:
    """Extract ``[MM:SS.mmm --> MM:SS.mmm] text`` lines from console output.

    Anything else (progress bars, model banners, stats lines) is skipped;
    the skip count comes back alongside the transcript so callers can report
    it. Matching lines with empty text or end before start are also skipped
    rather than fatal: console output is best-effort territory.
    """
    segments = []
    skipped = 0
    for raw in text.lstrip("﻿").splitlines():
        if not raw.strip():
            continue
        m = CONSOLE_LINE.match(raw)
        if not m:
            skipped += 1
            continue
        m1, s1, ms1, m2, s2, ms2 = (int(g) for g in m.groups()[:6])
        start = (m1 * 60 + s1) * 1000 + ms1
        end = (m2 * 60 + s2) * 1000 + ms2
        seg_text = m.group(7).strip()
        if not seg_text or end < start:
            skipped += 1
            continue
        segments.append(Segment(start, end, seg_text))
    return Transcript(source_label=label, segments=segments), skipped


def emit_srt(transcript: Transcript, newline: str = "\n") -> str:
    """Serialize to SubRip with 1-based counters and comma milliseconds."""
    if not transcript.segments:
        return ""
    blocks = []
    for i, seg in enumerate(transcript.segments, 1):
        blocks.append(
            f"{i}{newline}"
            f"{format_timestamp(seg.start_ms)} --> {format_timestamp(seg.end_ms)}{newline}"
            f"{seg.text}{newline}"
        )
    return newline.join(blocks)


def parse_reference(text: str) -> list[str]:
    """Reference lyrics: one line per lyric line, blanks dropped, ends trimmed."""
    return [line.strip() for line in text.splitlines() if line.strip()]
