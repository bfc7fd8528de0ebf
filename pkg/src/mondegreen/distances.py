"""Character- and word-level edit distances with phoneme-aware adjustment.

The character metric is plain Levenshtein (unit insert/delete/substitute).
On top of it sit two refinements used when comparing heard lyrics against
reference text:

* a *phoneme-adjusted* word distance that charges half price for a lone
  substitution between two easily-confused consonants (b/p, t/d by default),
* a token-level diff that aligns two word sequences and merges edits caused
  purely by different word segmentation into a single region, so "katu
  hauskaa" against "katuhaukka" is charged once, not per fragment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

DEFAULT_PHONEME_PAIRS: frozenset[frozenset[str]] = frozenset(
    {frozenset("bp"), frozenset("td")}
)


def levenshtein(a: str, b: str) -> int:
    """Minimal number of single-character edits turning ``a`` into ``b``."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[-1]


def parse_phoneme_pairs(text: str) -> frozenset[frozenset[str]]:
    """Parse a spec like ``"bp,td"`` into an unordered, case-folded pair set.

    An empty string yields an empty set (adjustment disabled).
    """
    pairs = set()
    for chunk in text.split(","):
        chunk = chunk.strip().lower()
        if not chunk:
            continue
        if len(chunk) != 2:
            raise ValueError(f"phoneme pair must be exactly two characters: {chunk!r}")
        pairs.add(frozenset(chunk))
    return frozenset(pairs)


def phoneme_adjusted_distance(
    ref_word: str,
    hyp_word: str,
    pairs: frozenset[frozenset[str]] = DEFAULT_PHONEME_PAIRS,
) -> float:
    """Levenshtein distance, halved when the only edit is a substitution
    between two characters that form a known confusion pair.

    The halving applies to exactly one lone substitution; any word pair with
    more than one edit, or with a length change, gets the plain distance.
    """
    dist = levenshtein(ref_word, hyp_word)
    if dist == 1 and len(ref_word) == len(hyp_word):
        # equal lengths + distance 1 means exactly one substituted position
        x, y = next((x, y) for x, y in zip(ref_word, hyp_word) if x != y)
        if frozenset((x.lower(), y.lower())) in pairs:
            return dist / 2
    return float(dist)


class DiffKind(Enum):
    MATCH = "match"
    SUBSTITUTION = "substitution"
    INSERTION = "insertion"
    DELETION = "deletion"


@dataclass(frozen=True)
class Diff:
    """One aligned region of a token-level diff.

    ``ref_span``/``hyp_span`` are space-joined tokens; one of them is empty
    for pure insertions/deletions. ``char_distance`` is the plain character
    distance between the two spans.
    """

    kind: DiffKind
    ref_span: str
    hyp_span: str
    char_distance: int


def alignment_cost(ref_tokens: Sequence[str], hyp_tokens: Sequence[str]) -> int:
    """Minimal cost of aligning two token sequences.

    Substituting one token for another costs their character distance;
    inserting or deleting a token costs its length.
    """
    return _align(list(ref_tokens), list(hyp_tokens))[0]


def _align(
    ref: list[str], hyp: list[str]
) -> tuple[int, list[tuple[str, str | None, str | None]]]:
    m, n = len(ref), len(hyp)
    sub_cost: dict[tuple[str, str], int] = {}

    def sub(r: str, h: str) -> int:
        key = (r, h)
        if key not in sub_cost:
            sub_cost[key] = levenshtein(r, h)
        return sub_cost[key]

    cost = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        cost[i][0] = cost[i - 1][0] + len(ref[i - 1])
    for j in range(1, n + 1):
        cost[0][j] = cost[0][j - 1] + len(hyp[j - 1])
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost[i][j] = min(
                cost[i - 1][j - 1] + sub(ref[i - 1], hyp[j - 1]),
                cost[i - 1][j] + len(ref[i - 1]),
                cost[i][j - 1] + len(hyp[j - 1]),
            )

    # Trace back, preferring diagonal steps so 1:1 alignments survive intact.
    ops: list[tuple[str, str | None, str | None]] = []
    i, j = m, n
    while i > 0 or j > 0:
        if (
            i > 0
            and j > 0
            and cost[i][j] == cost[i - 1][j - 1] + sub(ref[i - 1], hyp[j - 1])
        ):
            ops.append(("sub", ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and cost[i][j] == cost[i - 1][j] + len(ref[i - 1]):
            ops.append(("del", ref[i - 1], None))
            i -= 1
        else:
            ops.append(("ins", None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return cost[m][n], ops


def word_diff(
    ref_tokens: Sequence[str], hyp_tokens: Sequence[str]
) -> list[Diff]:
    """Token-level diff between a reference line and a hypothesis line.

    Runs of adjacent edits that contain an insertion or deletion are merged
    into one region (a word split or glued across token boundaries should be
    charged once, as the character distance of the joined spans). Runs made
    purely of 1:1 substitutions stay as separate per-token regions.
    """
    _, ops = _align(list(ref_tokens), list(hyp_tokens))
    diffs: list[Diff] = []
    run: list[tuple[str, str | None, str | None]] = []

    def flush() -> None:
        if not run:
            return
        if all(op == "sub" for op, _, _ in run):
            for _, r, h in run:
                assert r is not None and h is not None
                diffs.append(Diff(DiffKind.SUBSTITUTION, r, h, levenshtein(r, h)))
        else:
            ref_span = " ".join(r for _, r, _ in run if r is not None)
            hyp_span = " ".join(h for _, _, h in run if h is not None)
            if ref_span and hyp_span:
                kind = DiffKind.SUBSTITUTION
            elif hyp_span:
                kind = DiffKind.INSERTION
            else:
                kind = DiffKind.DELETION
            diffs.append(Diff(kind, ref_span, hyp_span, levenshtein(ref_span, hyp_span)))
        run.clear()

    for op, r, h in ops:
        if op == "sub" and r == h:
            flush()
            diffs.append(Diff(DiffKind.MATCH, r, h, 0))
        else:
            run.append((op, r, h))
    flush()
    return diffs
