"""Turn a trained alignment model into thresholded substitution rules.

Support is counted from one-best (Viterbi) alignments so the reported
"data points" are auditable integers: a rule's support is the number of
word pairs whose decoded alignment contains that link in that context.
Context-free rule probabilities come straight from the model's conditional
table; context-restricted ones renormalize the Viterbi counts within the
context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable

from .aligner import (
    Alignment,
    AlignmentConfig,
    AlignmentModel,
    Chunk,
    format_chunk,
    parse_chunk,
    viterbi_align,
)
from .lexicon import PairedLexicon

CONTEXT_ANY = "any"
CONTEXT_INITIAL = "word-initial"
CONTEXT_FINAL = "word-final"
CONTEXTS = (CONTEXT_ANY, CONTEXT_INITIAL, CONTEXT_FINAL)


class ProvenanceError(ValueError):
    """Model and paired lexicon do not come from the same pairing run."""


@dataclass(frozen=True)
class PhoneticRule:
    source: Chunk
    target: Chunk
    context: str
    probability: float
    support: int

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def __str__(self) -> str:
        return (
            f"{format_chunk(self.source)} -> {format_chunk(self.target)}"
            f" [{self.context}] p={self.probability:.4f} n={self.support}"
        )


@dataclass(frozen=True)
class MiningConfig:
    min_support: int
    min_probability: float
    contexts_enabled: bool = False

    def __post_init__(self) -> None:
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if not 0.0 < self.min_probability <= 1.0:
            raise ValueError("min_probability must be in (0, 1]")


PRESETS = {
    "broad": MiningConfig(min_support=200, min_probability=0.10),
    "strict": MiningConfig(min_support=100, min_probability=0.50),
}


@dataclass
class RuleSet:
    rules: tuple[PhoneticRule, ...]
    config: MiningConfig
    label: str = ""

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def find(self, source: Chunk, target: Chunk, context: str = CONTEXT_ANY) -> PhoneticRule | None:
        for rule in self.rules:
            if rule.source == source and rule.target == target and rule.context == context:
                return rule
        return None


def detect_context(alignment: Alignment, link_index: int) -> str:
    """Position class of one link: word-initial if it covers the first
    source phone (ties go to initial), word-final if the last, else any."""
    if not 0 <= link_index < len(alignment.links):
        raise IndexError(f"link index {link_index} out of range")
    consumed = 0
    for source_chunk, _ in alignment.links[:link_index]:
        consumed += len(source_chunk)
    width = len(alignment.links[link_index][0])
    total = sum(len(s) for s, _ in alignment.links)
    if width == 0:
        return CONTEXT_ANY
    if consumed == 0:
        return CONTEXT_INITIAL
    if consumed + width == total:
        return CONTEXT_FINAL
    return CONTEXT_ANY


def _sorted_rules(rules: Iterable[PhoneticRule]) -> tuple[PhoneticRule, ...]:
    return tuple(
        sorted(
            rules,
            key=lambda r: (-r.probability, -r.support, r.source, r.target, r.context),
        )
    )


def mine(
    model: AlignmentModel,
    paired: PairedLexicon,
    config: MiningConfig,
    aconfig: AlignmentConfig | None = None,
) -> RuleSet:
    """Viterbi-align every pair, count link support, emit thresholded rules.

    Every link occurrence counts toward its (source, target, any) rule;
    with ``contexts_enabled`` it additionally counts toward the positional
    rule reported by :func:`detect_context`.
    """
    if model.provenance != paired.label:
        raise ProvenanceError(
            f"model provenance {model.provenance!r} does not match paired lexicon {paired.label!r}"
        )
    aconfig = aconfig or AlignmentConfig()
    support: dict[tuple[Chunk, Chunk, str], int] = {}
    for pair in paired.pairs:
        alignment = viterbi_align(model, pair.source, pair.target, aconfig)
        seen: set[tuple[Chunk, Chunk, str]] = set()
        for index, (source_chunk, target_chunk) in enumerate(alignment.links):
            seen.add((source_chunk, target_chunk, CONTEXT_ANY))
            if config.contexts_enabled:
                context = detect_context(alignment, index)
                if context != CONTEXT_ANY:
                    seen.add((source_chunk, target_chunk, context))
        for key in seen:
            support[key] = support.get(key, 0) + 1
    context_totals: dict[tuple[Chunk, str], int] = {}
    for (source_chunk, _, context), count in support.items():
        if context != CONTEXT_ANY:
            key = (source_chunk, context)
            context_totals[key] = context_totals.get(key, 0) + count
    rules = []
    for (source_chunk, target_chunk, context), count in support.items():
        if context == CONTEXT_ANY:
            probability = model.prob(source_chunk, target_chunk)
        else:
            probability = count / context_totals[(source_chunk, context)]
        rules.append(PhoneticRule(source_chunk, target_chunk, context, probability, count))
    kept = [
        r
        for r in rules
        if r.support >= config.min_support and r.probability >= config.min_probability
    ]
    return RuleSet(rules=_sorted_rules(kept), config=config, label=paired.label)


def filter_rules(rules: RuleSet, config: MiningConfig) -> RuleSet:
    """Pure threshold application; idempotent, never adds rules."""
    kept = [
        r
        for r in rules.rules
        if r.support >= config.min_support and r.probability >= config.min_probability
    ]
    return RuleSet(rules=_sorted_rules(kept), config=config, label=rules.label)


def drop_identity(rules: RuleSet) -> RuleSet:
    kept = [r for r in rules.rules if not r.is_identity]
    return RuleSet(rules=_sorted_rules(kept), config=rules.config, label=rules.label)


def source_chunk_occurrences(paired: PairedLexicon, max_len: int = 2) -> dict[Chunk, int]:
    """How many pairs contain each source chunk (contiguously), for judging
    whether a literature rule's trigger is attested at all."""
    occurrences: dict[Chunk, int] = {}
    for pair in paired.pairs:
        seen: set[Chunk] = set()
        for width in range(1, max_len + 1):
            for start in range(len(pair.source) - width + 1):
                seen.add(pair.source[start : start + width])
        for chunk in seen:
            occurrences[chunk] = occurrences.get(chunk, 0) + 1
    return occurrences


def write_rules(rules: RuleSet, stream: IO[str]) -> None:
    """TSV rows ``source<TAB>target<TAB>context<TAB>probability<TAB>support``."""
    for rule in rules.rules:
        stream.write(
            f"{format_chunk(rule.source)}\t{format_chunk(rule.target)}\t"
            f"{rule.context}\t{rule.probability!r}\t{rule.support}\n"
        )


def read_rules(stream: IO[str], config: MiningConfig | None = None, label: str = "") -> RuleSet:
    rules = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 tab-separated fields")
        if parts[2] not in CONTEXTS:
            raise ValueError(f"line {lineno}: unknown context {parts[2]!r}")
        rules.append(
            PhoneticRule(
                source=parse_chunk(parts[0]),
                target=parse_chunk(parts[1]),
                context=parts[2],
                probability=float(parts[3]),
                support=int(parts[4]),
            )
        )
    config = config or MiningConfig(min_support=1, min_probability=1e-9)
    return RuleSet(rules=tuple(rules), config=config, label=label)
