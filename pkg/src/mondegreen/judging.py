"""Hallucination/mishearing triage, per-line scoring, and A/B verdicts.

A diff region is a *hallucination* when the hypothesis invents material with
no support in the reference (insertions, or substitutions that rewrite most
of the span) and a *mishearing* when it garbles or drops material that is
there. Lines are scored by hallucination count plus total adjusted distance;
two hypotheses are then compared line by line with hallucinations trumping
raw distance.

Manual annotations can override the rule-based call for any diff region,
optionally pinning the distance the region contributes; whenever a pinned
distance disagrees with what the metric recomputes, the line is flagged so
hand-made judgments stay auditable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Any, Iterable, Mapping

from .distances import (
    DEFAULT_PHONEME_PAIRS,
    Diff,
    DiffKind,
    phoneme_adjusted_distance,
    word_diff,
)
from .errors import AnnotationError
from .textnorm import LyricPair


class Kind(Enum):
    MATCH = "match"
    MISHEARING = "mishearing"
    HALLUCINATION = "hallucination"


class Source(Enum):
    AUTO = "auto"
    ANNOTATED = "annotated"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    source: Source = Source.AUTO


def classify_diff(diff: Diff, threshold: float = 0.5) -> Classification:
    """Rule-based triage of one diff region.

    Insertions are hallucinations, deletions are mishearings, and a
    substitution is a hallucination once char_distance / len(longer span)
    exceeds ``threshold`` (strictly).
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if diff.kind is DiffKind.MATCH:
        return Classification(Kind.MATCH)
    if diff.kind is DiffKind.INSERTION:
        return Classification(Kind.HALLUCINATION)
    if diff.kind is DiffKind.DELETION:
        return Classification(Kind.MISHEARING)
    ratio = diff.char_distance / max(len(diff.ref_span), len(diff.hyp_span))
    return Classification(Kind.HALLUCINATION if ratio > threshold else Kind.MISHEARING)


@dataclass(frozen=True)
class Annotation:
    """A manual call attached to one diff region of one pair."""

    pair_label: str
    diff_index: int
    kind: Kind
    distance_override: float | None = None
    note: str = ""


def parse_annotations(data: Any) -> list[Annotation]:
    """Validate a decoded annotations JSON document (a list of objects)."""
    if not isinstance(data, list):
        raise AnnotationError("annotations must be a JSON array")
    out = []
    for pos, item in enumerate(data):
        if not isinstance(item, dict):
            raise AnnotationError(f"annotation {pos} is not an object")
        unknown = set(item) - {"pair_label", "diff_index", "kind", "distance_override", "note"}
        if unknown:
            raise AnnotationError(f"annotation {pos} has unknown keys: {sorted(unknown)}")
        try:
            kind = Kind(item.get("kind"))
        except ValueError:
            raise AnnotationError(
                f"annotation {pos}: kind must be 'hallucination' or 'mishearing'"
            ) from None
        if kind is Kind.MATCH:
            raise AnnotationError(f"annotation {pos}: cannot annotate a region as 'match'")
        if not isinstance(item.get("pair_label"), str) or not item["pair_label"]:
            raise AnnotationError(f"annotation {pos} needs a pair_label")
        if not isinstance(item.get("diff_index"), int):
            raise AnnotationError(f"annotation {pos} needs an integer diff_index")
        override = item.get("distance_override")
        if override is not None and not isinstance(override, (int, float)):
            raise AnnotationError(f"annotation {pos}: distance_override must be a number")
        out.append(
            Annotation(
                pair_label=item["pair_label"],
                diff_index=item["diff_index"],
                kind=kind,
                distance_override=None if override is None else float(override),
                note=item.get("note", ""),
            )
        )
    return out


@dataclass(frozen=True)
class ScoredDiff:
    diff: Diff
    classification: Classification
    distance: float  # contribution to the line total
    auto_distance: float  # what the metric computes unaided


@dataclass(frozen=True)
class LineScore:
    hallucination_count: int
    adjusted_distance: float
    diffs: tuple[ScoredDiff, ...]


def _auto_distance(diff: Diff, pairs: frozenset[frozenset[str]]) -> float:
    # phoneme halving applies to single-word substitutions only
    if (
        diff.kind is DiffKind.SUBSTITUTION
        and " " not in diff.ref_span
        and " " not in diff.hyp_span
    ):
        return phoneme_adjusted_distance(diff.ref_span, diff.hyp_span, pairs)
    return float(diff.char_distance)


def score_line(
    pair: LyricPair,
    phoneme_pairs: frozenset[frozenset[str]] = DEFAULT_PHONEME_PAIRS,
    annotations: Iterable[Annotation] = (),
    threshold: float = 0.5,
) -> LineScore:
    """Diff one pair and roll the regions up into a line score.

    ``annotations`` must all target this pair's label; they replace the
    rule-based classification for their region and may pin its distance.
    """
    diffs = word_diff(pair.reference.tokens, pair.hypothesis.tokens)
    by_index: dict[int, Annotation] = {}
    for a in annotations:
        if a.pair_label != pair.label:
            raise AnnotationError(
                f"annotation for {a.pair_label!r} applied to pair {pair.label!r}"
            )
        if not 0 <= a.diff_index < len(diffs):
            raise AnnotationError(
                f"{a.pair_label!r}: no diff region at index {a.diff_index} "
                f"(pair has {len(diffs)})"
            )
        by_index[a.diff_index] = a
    scored = []
    hallucinations = 0
    total = 0.0
    for idx, diff in enumerate(diffs):
        auto = _auto_distance(diff, phoneme_pairs)
        ann = by_index.get(idx)
        if ann is not None:
            cls = Classification(ann.kind, Source.ANNOTATED)
            dist = auto if ann.distance_override is None else ann.distance_override
        else:
            cls = classify_diff(diff, threshold)
            dist = 0.0 if cls.kind is Kind.MATCH else auto
        if cls.kind is Kind.HALLUCINATION:
            hallucinations += 1
        total += dist
        scored.append(ScoredDiff(diff, cls, dist, auto))
    return LineScore(hallucinations, total, tuple(scored))


class Winner(Enum):
    A = "A"
    B = "B"
    DRAW = "draw"


class Reason(Enum):
    NO_HALLUCINATION = "no_hallucination_beats_hallucination"
    FEWER_HALLUCINATIONS = "fewer_hallucinations"
    SMALLER_DISTANCE = "smaller_distance"
    EQUAL = "equal"


@dataclass(frozen=True)
class Verdict:
    winner: Winner
    reason: Reason


def decide_winner(a: LineScore, b: LineScore) -> Verdict:
    """Per-line decision: hallucination-free beats hallucinating, then fewer
    hallucinations, then smaller distance, else a draw."""
    if (a.hallucination_count == 0) != (b.hallucination_count == 0):
        side = Winner.A if a.hallucination_count == 0 else Winner.B
        return Verdict(side, Reason.NO_HALLUCINATION)
    if a.hallucination_count != b.hallucination_count:
        side = Winner.A if a.hallucination_count < b.hallucination_count else Winner.B
        return Verdict(side, Reason.FEWER_HALLUCINATIONS)
    if a.adjusted_distance != b.adjusted_distance:
        side = Winner.A if a.adjusted_distance < b.adjusted_distance else Winner.B
        return Verdict(side, Reason.SMALLER_DISTANCE)
    return Verdict(Winner.DRAW, Reason.EQUAL)


@dataclass(frozen=True)
class Tally:
    wins_a: int
    wins_b: int
    draws: int


def aggregate(verdicts: Iterable[Verdict]) -> Tally:
    vs = list(verdicts)
    return Tally(
        wins_a=sum(1 for v in vs if v.winner is Winner.A),
        wins_b=sum(1 for v in vs if v.winner is Winner.B),
        draws=sum(1 for v in vs if v.winner is Winner.DRAW),
    )


@dataclass(frozen=True)
class PairResult:
    label: str
    pair_a: LyricPair
    pair_b: LyricPair
    score_a: LineScore
    score_b: LineScore
    verdict: Verdict
    discrepancies: tuple[str, ...]


def _override_flags(side: str, score: LineScore) -> list[str]:
    flags = []
    for idx, sd in enumerate(score.diffs):
        if sd.classification.source is Source.ANNOTATED and sd.distance != sd.auto_distance:
            flags.append(
                f"{side} diff {idx} ({sd.diff.ref_span!r} -> {sd.diff.hyp_span!r}): "
                f"annotated distance {_num(sd.distance)}, recomputed {_num(sd.auto_distance)}"
            )
    return flags


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


def evaluate_pairs(
    pairs_a: list[LyricPair],
    pairs_b: list[LyricPair],
    annotations: Iterable[Annotation] = (),
    phoneme_pairs: frozenset[frozenset[str]] = DEFAULT_PHONEME_PAIRS,
    threshold: float = 0.5,
) -> tuple[list[PairResult], Tally]:
    """Score two hypothesis sides over the same reference lines.

    The two lists must be the same length and aligned on reference lines.
    Annotations are routed by pair label; one that matches no pair at all is
    an error rather than silently ignored.
    """
    if len(pairs_a) != len(pairs_b):
        raise AnnotationError(
            f"side A has {len(pairs_a)} pairs but side B has {len(pairs_b)}; "
            "both sides must cover the same reference lines"
        )
    by_label: dict[str, list[Annotation]] = {}
    for ann in annotations:
        by_label.setdefault(ann.pair_label, []).append(ann)
    known = {p.label for p in pairs_a} | {p.label for p in pairs_b}
    dangling = sorted(set(by_label) - known)
    if dangling:
        raise AnnotationError(f"annotations reference unknown pairs: {dangling}")

    results = []
    for pa, pb in zip(pairs_a, pairs_b):
        if pa.reference.tokens != pb.reference.tokens:
            raise AnnotationError(
                f"pairs {pa.label!r} and {pb.label!r} do not share a reference line"
            )
        score_a = score_line(pa, phoneme_pairs, by_label.get(pa.label, ()), threshold)
        score_b = score_line(pb, phoneme_pairs, by_label.get(pb.label, ()), threshold)
        verdict = decide_winner(score_a, score_b)
        discrepancies = _override_flags("A", score_a) + _override_flags("B", score_b)
        label = _row_label(pa.label, pb.label)
        results.append(
            PairResult(label, pa, pb, score_a, score_b, verdict, tuple(discrepancies))
        )
    return results, aggregate(r.verdict for r in results)


def _row_label(label_a: str, label_b: str) -> str:
    head_a = label_a.split(" / ")[0].strip()
    head_b = label_b.split(" / ")[0].strip()
    return head_a if head_a == head_b else f"{label_a} | {label_b}"


def _score_doc(score: LineScore) -> dict:
    return {
        "hallucinations": score.hallucination_count,
        "distance": score.adjusted_distance,
        "diffs": [
            {
                "kind": sd.diff.kind.value,
                "ref_span": sd.diff.ref_span,
                "hyp_span": sd.diff.hyp_span,
                "char_distance": sd.diff.char_distance,
                "classification": sd.classification.kind.value,
                "source": sd.classification.source.value,
                "distance": sd.distance,
                "auto_distance": sd.auto_distance,
            }
            for sd in score.diffs
        ],
    }


def _tally_discrepancy(tally: Tally, stated: Mapping[str, int | None] | None) -> str | None:
    if stated is None:
        return None
    mismatches = []
    for key, computed in (
        ("wins_a", tally.wins_a),
        ("wins_b", tally.wins_b),
        ("draws", tally.draws),
    ):
        value = stated.get(key)
        if value is not None and value != computed:
            mismatches.append(f"{key}: stated {value}, computed {computed}")
    if mismatches:
        return "stated tally disagrees with computed verdicts: " + "; ".join(mismatches)
    return None


def build_report(
    results: list[PairResult],
    tally: Tally,
    *,
    label_a: str = "A",
    label_b: str = "B",
    phoneme_pairs: frozenset[frozenset[str]] = DEFAULT_PHONEME_PAIRS,
    threshold: float = 0.5,
    stated_tally: Mapping[str, int | None] | None = None,
    generated_at: str | None = None,
) -> dict:
    """Machine-readable evaluation report (validates against report_schema.json)."""
    report = {
        "label_a": label_a,
        "label_b": label_b,
        "threshold": threshold,
        "phoneme_pairs": sorted("".join(sorted(p)) for p in phoneme_pairs),
        "pairs": [
            {
                "label": r.label,
                "ref": r.pair_a.reference.original,
                "hyp_a": r.pair_a.hypothesis.original,
                "hyp_b": r.pair_b.hypothesis.original,
                "score_a": _score_doc(r.score_a),
                "score_b": _score_doc(r.score_b),
                "verdict": r.verdict.winner.value,
                "reason": r.verdict.reason.value,
                "discrepancies": list(r.discrepancies),
            }
            for r in results
        ],
        "tally_a": tally.wins_a,
        "tally_b": tally.wins_b,
        "draws": tally.draws,
        "stated_tally": dict(stated_tally) if stated_tally is not None else None,
        "tally_discrepancy": _tally_discrepancy(tally, stated_tally),
    }
    if generated_at is not None:
        report["generated_at"] = generated_at
    return report


def format_table(report: Mapping[str, Any]) -> str:
    """Human-readable rendering of a report document."""
    label_a = report["label_a"]
    label_b = report["label_b"]
    width = max(len("real"), len(label_a), len(label_b)) + 1
    lines = []
    for row in report["pairs"]:
        winner = row["verdict"]
        verdict = {"A": label_a, "B": label_b}.get(winner, winner)
        lines.append(row["label"])
        lines.append(f"  {'real:':<{width + 1}} {row['ref']}")
        for side, text in (("a", row["hyp_a"]), ("b", row["hyp_b"])):
            label = label_a if side == "a" else label_b
            score = row[f"score_{side}"]
            lines.append(
                f"  {label + ':':<{width + 1}} {text}   "
                f"[hallucinations {score['hallucinations']}, "
                f"distance {_num(score['distance'])}]"
            )
        lines.append(f"  verdict: {verdict} ({row['reason']})")
        for note in row["discrepancies"]:
            lines.append(f"  note: {note}")
        lines.append("")
    lines.append(
        f"wins: {label_a} {report['tally_a']}, {label_b} {report['tally_b']}, "
        f"draws {report['draws']}"
    )
    if report.get("tally_discrepancy"):
        lines.append(f"note: {report['tally_discrepancy']}")
    return "\n".join(lines) + "\n"


def load_report_schema() -> dict:
    """The JSON schema that build_report output conforms to."""
    text = resources.files("mondegreen").joinpath("report_schema.json").read_text("utf-8")
    return json.loads(text)
