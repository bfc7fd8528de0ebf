"""Lyric text normalization and reference/hypothesis line pairing."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Any, Iterable

from .distances import levenshtein
from .errors import PairingError
from .subtitles import Transcript

# punctuation stripped from token boundaries; intra-word hyphens survive
_BOUNDARY_PUNCT = '.,!?"…-'


@dataclass(frozen=True)
class NormalizedLine:
    original: str
    tokens: tuple[str, ...]

    @property
    def joined(self) -> str:
        return " ".join(self.tokens)


def normalize(line: str) -> NormalizedLine:
    """Case-fold and tokenize one lyric line.

    Unicode is NFC-composed, everything lowercased, tokens split on
    whitespace, and boundary punctuation trimmed; tokens emptied by the
    trimming are dropped. Idempotent on its own output.
    """
    folded = unicodedata.normalize("NFC", line).lower()
    tokens = tuple(
        t for t in (tok.strip(_BOUNDARY_PUNCT) for tok in folded.split()) if t
    )
    return NormalizedLine(original=line, tokens=tokens)


@dataclass(frozen=True)
class LyricPair:
    reference: NormalizedLine
    hypothesis: NormalizedLine
    label: str


@dataclass(frozen=True)
class PairingEntry:
    """One row of a pairing spec file.

    Exactly one of ``hyp_index`` (into a transcript's segments) or
    ``hyp_text`` (inline hypothesis) must be given. ``side`` routes the entry
    to hypothesis A or B in two-sided evaluations.
    """

    ref_index: int
    hyp_index: int | None = None
    hyp_text: str | None = None
    label: str = ""
    side: str = "a"
    note: str = ""


def parse_pairing_spec(data: Any) -> list[PairingEntry]:
    """Validate a decoded pairs JSON document (a list of objects)."""
    if not isinstance(data, list):
        raise PairingError("pairing spec must be a JSON array")
    entries = []
    for pos, item in enumerate(data):
        if not isinstance(item, dict):
            raise PairingError(f"pairing entry {pos} is not an object")
        unknown = set(item) - {"ref_index", "hyp_index", "hyp_text", "label", "side", "note"}
        if unknown:
            raise PairingError(f"pairing entry {pos} has unknown keys: {sorted(unknown)}")
        if not isinstance(item.get("ref_index"), int):
            raise PairingError(f"pairing entry {pos} needs an integer ref_index")
        if (item.get("hyp_index") is None) == (item.get("hyp_text") is None):
            raise PairingError(
                f"pairing entry {pos} needs exactly one of hyp_index or hyp_text"
            )
        side = item.get("side", "a")
        if side not in ("a", "b"):
            raise PairingError(f"pairing entry {pos}: side must be 'a' or 'b'")
        entries.append(
            PairingEntry(
                ref_index=item["ref_index"],
                hyp_index=item.get("hyp_index"),
                hyp_text=item.get("hyp_text"),
                label=item.get("label", ""),
                side=side,
                note=item.get("note", ""),
            )
        )
    return entries


def pair_lyrics(
    ref_lines: list[str],
    transcript: Transcript | None,
    entries: Iterable[PairingEntry],
) -> list[LyricPair]:
    """Resolve pairing entries into normalized (reference, hypothesis) pairs.

    Pairs come back in reference order. Out-of-range indices and pairs that
    normalize to nothing are errors.
    """
    pairs = []
    for e in sorted(entries, key=lambda e: e.ref_index):
        if not 0 <= e.ref_index < len(ref_lines):
            raise PairingError(
                f"ref_index {e.ref_index} out of range (have {len(ref_lines)} reference lines)"
            )
        if e.hyp_text is not None:
            hyp_line = e.hyp_text
        elif e.hyp_index is not None:
            if transcript is None:
                raise PairingError(
                    f"entry for ref_index {e.ref_index} uses hyp_index but no transcript was given"
                )
            if not 0 <= e.hyp_index < len(transcript.segments):
                raise PairingError(
                    f"hyp_index {e.hyp_index} out of range "
                    f"(transcript has {len(transcript.segments)} segments)"
                )
            hyp_line = transcript.segments[e.hyp_index].text
        else:
            raise PairingError(f"entry for ref_index {e.ref_index} has no hypothesis")
        reference = normalize(ref_lines[e.ref_index])
        hypothesis = normalize(hyp_line)
        label = e.label or f"line {e.ref_index + 1}"
        if not reference.tokens or not hypothesis.tokens:
            raise PairingError(f"{label}: line is empty after normalization")
        pairs.append(LyricPair(reference, hypothesis, label))
    return pairs


def auto_pair(
    ref_lines: list[str], transcript: Transcript, label_suffix: str = ""
) -> tuple[list[LyricPair], list[int]]:
    """Greedy in-order pairing of reference lines onto transcript segments.

    Each reference line takes the not-yet-used later segment with the lowest
    character distance, keeping segment order monotone. Returns the pairs
    plus indices of reference lines left unpaired (transcript exhausted or
    empty after normalization).
    """
    norm_segs = [normalize(s.text) for s in transcript.segments]
    pairs: list[LyricPair] = []
    unpaired: list[int] = []
    cursor = -1
    for i, line in enumerate(ref_lines):
        nref = normalize(line)
        if not nref.tokens:
            unpaired.append(i)
            continue
        best: tuple[int, int] | None = None
        for j in range(cursor + 1, len(norm_segs)):
            if not norm_segs[j].tokens:
                continue
            d = levenshtein(nref.joined, norm_segs[j].joined)
            if best is None or d < best[0]:
                best = (d, j)
        if best is None:
            unpaired.append(i)
            continue
        cursor = best[1]
        label = f"line {i + 1}" + (f" / {label_suffix}" if label_suffix else "")
        pairs.append(LyricPair(nref, norm_segs[cursor], label))
    return pairs, unpaired
