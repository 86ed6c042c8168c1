"""Machine-readable literature rules and the four-way categorization of
mined rules against them.

Rulebook file format, one rule per line::

    source → target1, target2 | context | citation-tag [| unverifiable]

Chunks are space-separated phones (``_`` for the empty chunk); ``#``
starts a comment.  A rule flagged ``unverifiable`` needs grapheme or audio
evidence this phone-only pipeline cannot provide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

from .aligner import Chunk, format_chunk, parse_chunk
from .mining import CONTEXT_ANY, CONTEXTS, MiningConfig, PhoneticRule, RuleSet
from .phones import PhoneError, normalize_ipa, parse_ipa_string

UNVERIFIABLE_FLAG = "unverifiable"


class RulebookFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class LiteratureRule:
    source: Chunk
    targets: tuple[Chunk, ...]  # alternates licensed by the same rule
    context: str
    citation: str
    verifiable: bool = True

    def __str__(self) -> str:
        alts = ", ".join(format_chunk(t) for t in self.targets)
        return f"{format_chunk(self.source)} -> {alts} [{self.context}] ({self.citation})"


def _parse_rule_chunk(text: str, lineno: int) -> Chunk:
    text = text.strip()
    if text == "_" or not text:
        return ()
    try:
        return parse_ipa_string(normalize_ipa(text))
    except PhoneError as exc:
        raise RulebookFormatError(lineno, str(exc)) from None


def load_rulebook(stream: IO[str]) -> list[LiteratureRule]:
    rules: list[LiteratureRule] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "→" in line:
            left, right = line.split("→", 1)
        elif "->" in line:
            left, right = line.split("->", 1)
        else:
            raise RulebookFormatError(lineno, "missing '→' between source and targets")
        fields = [part.strip() for part in right.split("|")]
        if len(fields) < 3:
            raise RulebookFormatError(
                lineno, "expected 'source → targets | context | citation [| unverifiable]'"
            )
        targets = tuple(
            _parse_rule_chunk(t, lineno) for t in fields[0].split(",") if t.strip()
        )
        if not targets:
            raise RulebookFormatError(lineno, "empty target list")
        context = fields[1]
        if context not in CONTEXTS:
            raise RulebookFormatError(lineno, f"unknown context {context!r}")
        citation = fields[2]
        if not citation:
            raise RulebookFormatError(lineno, "empty citation tag")
        verifiable = True
        if len(fields) >= 4:
            if fields[3] != UNVERIFIABLE_FLAG:
                raise RulebookFormatError(lineno, f"unknown flag {fields[3]!r}")
            verifiable = False
        rules.append(
            LiteratureRule(
                source=_parse_rule_chunk(left, lineno),
                targets=targets,
                context=context,
                citation=citation,
                verifiable=verifiable,
            )
        )
    return rules


REASON_FLAGGED = "needs grapheme or audio evidence"


@dataclass
class CategorizedReport:
    """Four disjoint buckets jointly covering every mined and literature rule."""

    in_lit_and_data: list[tuple[LiteratureRule, tuple[PhoneticRule, ...]]] = field(
        default_factory=list
    )
    in_data_not_lit: list[PhoneticRule] = field(default_factory=list)
    in_lit_not_data: list[LiteratureRule] = field(default_factory=list)
    in_lit_not_verifiable: list[tuple[LiteratureRule, str]] = field(default_factory=list)

    def counts(self) -> tuple[int, int, int, int]:
        return (
            len(self.in_lit_and_data),
            len(self.in_data_not_lit),
            len(self.in_lit_not_data),
            len(self.in_lit_not_verifiable),
        )


def _contexts_compatible(a: str, b: str) -> bool:
    return a == b or a == CONTEXT_ANY or b == CONTEXT_ANY


def _matches(lit: LiteratureRule, mined: PhoneticRule) -> bool:
    return (
        lit.source == mined.source
        and mined.target in lit.targets
        and _contexts_compatible(lit.context, mined.context)
    )


def categorize(
    mined: RuleSet,
    lit: list[LiteratureRule],
    source_occurrences: dict[Chunk, int],
    config: MiningConfig,
) -> CategorizedReport:
    """Partition mined and literature rules into the four buckets.

    A literature rule is validated when any mined rule matches it; all
    matching mined rules are attached as evidence.  An unmatched literature
    rule goes to "not verifiable" when it is flagged or when its source
    chunk occurs fewer than ``min_support`` times in the paired data;
    otherwise to "in literature, not in data".  The outcome does not depend
    on the ordering of either input.
    """
    report = CategorizedReport()
    claimed: set[PhoneticRule] = set()
    for rule in lit:
        evidence = tuple(m for m in mined.rules if _matches(rule, m))
        if evidence:
            claimed.update(evidence)
            report.in_lit_and_data.append((rule, evidence))
        elif not rule.verifiable:
            report.in_lit_not_verifiable.append((rule, REASON_FLAGGED))
        else:
            attested = source_occurrences.get(rule.source, 0)
            if attested < config.min_support:
                report.in_lit_not_verifiable.append(
                    (rule, f"source chunk attested {attested} < {config.min_support} times")
                )
            else:
                report.in_lit_not_data.append(rule)
    for m in mined.rules:
        if m not in claimed:
            report.in_data_not_lit.append(m)
    return report


BUCKET_LABELS = (
    ("lit+data", "Observed in literature and dataset"),
    ("data-only", "Observed in dataset but not in literature"),
    ("lit-only", "In literature but not in dataset"),
    ("lit-unverifiable", "In literature, not verifiable from dataset"),
)


def write_report(report: CategorizedReport, stream: IO[str]) -> None:
    """Human-readable categorization summary."""
    c = report.counts()
    stream.write("Rule categorization\n")
    stream.write("===================\n")
    for (tag, title), n in zip(BUCKET_LABELS, c):
        stream.write(f"{title}: {n}\n")
    stream.write("\n")
    stream.write(f"[{BUCKET_LABELS[0][1]}]\n")
    for rule, evidence in report.in_lit_and_data:
        stream.write(f"  {rule}\n")
        for m in evidence:
            stream.write(f"    validated by {m}\n")
    stream.write(f"\n[{BUCKET_LABELS[1][1]}]\n")
    for m in report.in_data_not_lit:
        stream.write(f"  {m}\n")
    stream.write(f"\n[{BUCKET_LABELS[2][1]}]\n")
    for rule in report.in_lit_not_data:
        stream.write(f"  {rule}\n")
    stream.write(f"\n[{BUCKET_LABELS[3][1]}]\n")
    for rule, reason in report.in_lit_not_verifiable:
        stream.write(f"  {rule} ({reason})\n")


def write_report_tsv(report: CategorizedReport, stream: IO[str]) -> None:
    """One row per rule: bucket, source, target(s), context, probability,
    support, citation."""

    def row(bucket: str, source: Chunk, targets: str, context: str,
            probability: str, support: str, citation: str) -> None:
        stream.write(
            f"{bucket}\t{format_chunk(source)}\t{targets}\t{context}\t"
            f"{probability}\t{support}\t{citation}\n"
        )

    for rule, evidence in report.in_lit_and_data:
        for m in evidence:
            row("lit+data", m.source, format_chunk(m.target), m.context,
                repr(m.probability), str(m.support), rule.citation)
    for m in report.in_data_not_lit:
        row("data-only", m.source, format_chunk(m.target), m.context,
            repr(m.probability), str(m.support), "")
    for rule in report.in_lit_not_data:
        targets = ", ".join(format_chunk(t) for t in rule.targets)
        row("lit-only", rule.source, targets, rule.context, "", "", rule.citation)
    for rule, reason in report.in_lit_not_verifiable:
        targets = ", ".join(format_chunk(t) for t in rule.targets)
        row("lit-unverifiable", rule.source, targets, rule.context, "", reason, rule.citation)
