"""Transcription agreement: edit alignment with a dummy class, then
Cohen's kappa.

Two transcriptions of the same audio may differ in length; a minimal
edit-distance alignment pads both sides with a reserved dummy label at the
gaps so positions become comparable.  The dummy participates in the chance
term like any other class.  Kappa is computed per pair and averaged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .phones import parse_ipa_string

DUMMY = "∅"

_MATCH, _MISMATCH, _GAP_A, _GAP_B = range(4)


class AgreementError(ValueError):
    pass


@dataclass(frozen=True)
class LabelSequencePair:
    a: tuple[str, ...]
    b: tuple[str, ...]


@dataclass
class KappaReport:
    per_pair: list[tuple[str, float]]
    mean: float
    count: int


def align_with_dummy(a: Sequence[str], b: Sequence[str]) -> LabelSequencePair:
    """Pad two label sequences to equal length with the dummy label.

    Uses a unit-cost minimal edit alignment (match 0; mismatch and gap 1).
    On equal-cost paths the preference is match, then mismatch, then a gap
    in the first sequence, then a gap in the second.  The inputs are
    oriented canonically before aligning so that swapping the arguments
    always swaps the padding (the bare per-call gap preference would break
    that on crossing ties).  Stripping dummies recovers the inputs.
    """
    if DUMMY in a or DUMMY in b:
        raise AgreementError(f"the dummy label {DUMMY!r} may not appear in raw input")
    if tuple(b) < tuple(a):
        flipped = align_with_dummy(b, a)
        return LabelSequencePair(flipped.b, flipped.a)
    m, n = len(a), len(b)
    cost = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        cost[i][0] = i
    for j in range(1, n + 1):
        cost[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            diag = cost[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            gap_a = cost[i][j - 1] + 1
            gap_b = cost[i - 1][j] + 1
            cost[i][j] = min(diag, gap_a, gap_b)
    out_a: list[str] = []
    out_b: list[str] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            step = cost[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            if step == cost[i][j]:
                out_a.append(a[i - 1])
                out_b.append(b[j - 1])
                i, j = i - 1, j - 1
                continue
        if j > 0 and cost[i][j - 1] + 1 == cost[i][j]:
            out_a.append(DUMMY)
            out_b.append(b[j - 1])
            j -= 1
            continue
        out_a.append(a[i - 1])
        out_b.append(DUMMY)
        i -= 1
    out_a.reverse()
    out_b.reverse()
    return LabelSequencePair(tuple(out_a), tuple(out_b))


def cohen_kappa(pair: LabelSequencePair) -> float:
    """Chance-corrected agreement between two equal-length label sequences.

    Computed in exact integer arithmetic: with n positions, m matches and
    per-label counts ca/cb, kappa = (m*n - sum(ca*cb)) / (n^2 - sum(ca*cb)).
    When both sequences are the same constant (chance term 1), kappa is 1.
    """
    a, b = pair.a, pair.b
    if len(a) != len(b):
        raise AgreementError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n == 0:
        raise AgreementError("cannot score empty sequences")
    matches = sum(1 for x, y in zip(a, b) if x == y)
    counts_a: dict[str, int] = {}
    counts_b: dict[str, int] = {}
    for x in a:
        counts_a[x] = counts_a.get(x, 0) + 1
    for y in b:
        counts_b[y] = counts_b.get(y, 0) + 1
    chance = sum(c * counts_b.get(label, 0) for label, c in counts_a.items())
    if chance == n * n:
        return 1.0
    return (matches * n - chance) / (n * n - chance)


def mean_kappa(items: Iterable[tuple[str, Sequence[str], Sequence[str]]]) -> KappaReport:
    """Align each (id, a, b) item with dummies, score it, and average."""
    per_pair: list[tuple[str, float]] = []
    for pair_id, a, b in items:
        per_pair.append((pair_id, cohen_kappa(align_with_dummy(a, b))))
    if not per_pair:
        raise AgreementError("no transcription pairs to score")
    mean = sum(k for _, k in per_pair) / len(per_pair)
    return KappaReport(per_pair=per_pair, mean=mean, count=len(per_pair))


def read_pairs_tsv(stream: IO[str]) -> list[tuple[str, tuple[str, ...], tuple[str, ...]]]:
    """Rows ``pair-id<TAB>ipa-a<TAB>ipa-b``; IPA strings are tokenized to
    phone labels."""
    items = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise AgreementError(f"row {lineno}: expected 'pair-id<TAB>ipa-a<TAB>ipa-b'")
        try:
            a = parse_ipa_string(parts[1].strip())
            b = parse_ipa_string(parts[2].strip())
        except ValueError as exc:
            raise AgreementError(f"row {lineno}: {exc}") from None
        items.append((parts[0].strip(), a, b))
    return items


def write_report(report: KappaReport, stream: IO[str]) -> None:
    """Per-pair TSV rows followed by the summary line ``mean<TAB>count``."""
    for pair_id, kappa in report.per_pair:
        stream.write(f"{pair_id}\t{kappa!r}\n")
    stream.write(f"mean\t{report.mean!r}\t{report.count}\n")
