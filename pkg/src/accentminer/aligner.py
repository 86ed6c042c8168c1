"""Many-to-many monotone alignment between phone sequences, trained by EM.

The model is a conditional chunk-substitution table P(target-chunk |
source-chunk) over chunks of bounded length (two phones by default on both
sides).  Training runs expectation-maximization over the monotone chunking
lattice of every pair: the E-step accumulates expected link counts with the
forward-backward recurrences, the M-step renormalizes per source chunk.
All lattice arithmetic is in log domain with an explicit -inf sentinel.

A deleted source phone is a link to the empty chunk; links pairing the
empty source chunk with a target phone are disabled by default, so target
insertions surface as one-to-two links instead.  Deletion links always
carry a single phone (longer deletions chain).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterator

from .phones import Pronunciation

Chunk = tuple[str, ...]
ChunkPair = tuple[Chunk, Chunk]

EMPTY_CHUNK: Chunk = ()
NEG_INF = float("-inf")


class AlignmentError(ValueError):
    pass


class UnalignableError(AlignmentError):
    """No monotone chunking with positive mass exists for a pair."""


@dataclass(frozen=True)
class AlignmentConfig:
    max_source_chunk: int = 2
    max_target_chunk: int = 2
    allow_source_deletion: bool = True
    allow_target_deletion: bool = False
    max_iterations: int = 100
    rel_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.max_source_chunk < 1 or self.max_target_chunk < 1:
            raise ValueError("chunk maxima must be >= 1")
        if self.rel_tolerance <= 0:
            raise ValueError("rel_tolerance must be > 0")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass
class AlignmentModel:
    """Conditional chunk table plus the log-likelihood trace of training."""

    probs: dict[ChunkPair, float]
    log_likelihood_history: list[float] = field(default_factory=list)
    provenance: str = ""

    def prob(self, source: Chunk, target: Chunk) -> float:
        return self.probs.get((source, target), 0.0)


@dataclass
class Alignment:
    links: tuple[ChunkPair, ...]
    score: float  # log probability of this chunking

    @property
    def source(self) -> Pronunciation:
        return tuple(p for chunk, _ in self.links for p in chunk)

    @property
    def target(self) -> Pronunciation:
        return tuple(p for _, chunk in self.links for p in chunk)


def _moves(config: AlignmentConfig) -> tuple[tuple[int, int], ...]:
    """Allowed (source, target) chunk sizes, in Viterbi preference order:
    shorter source chunk first, then shorter target chunk."""
    moves = []
    if config.allow_target_deletion:
        moves.append((0, 1))
    if config.allow_source_deletion:
        moves.append((1, 0))
    for ds in range(1, config.max_source_chunk + 1):
        for dt in range(1, config.max_target_chunk + 1):
            moves.append((ds, dt))
    return tuple(sorted(moves))


def _logadd(x: float, y: float) -> float:
    if x == NEG_INF:
        return y
    if y == NEG_INF:
        return x
    if x < y:
        x, y = y, x
    return x + math.log1p(math.exp(y - x))


def _forward(
    source: Pronunciation,
    target: Pronunciation,
    logprobs: dict[ChunkPair, float],
    moves: tuple[tuple[int, int], ...],
) -> list[list[float]]:
    m, n = len(source), len(target)
    alpha = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    alpha[0][0] = 0.0
    for i in range(m + 1):
        row = alpha[i]
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            acc = NEG_INF
            for ds, dt in moves:
                if ds > i or dt > j:
                    continue
                prev = alpha[i - ds][j - dt]
                if prev == NEG_INF:
                    continue
                lp = logprobs.get((source[i - ds : i], target[j - dt : j]))
                if lp is None:
                    continue
                acc = _logadd(acc, prev + lp)
            row[j] = acc
    return alpha


def _backward(
    source: Pronunciation,
    target: Pronunciation,
    logprobs: dict[ChunkPair, float],
    moves: tuple[tuple[int, int], ...],
) -> list[list[float]]:
    m, n = len(source), len(target)
    beta = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    beta[m][n] = 0.0
    for i in range(m, -1, -1):
        row = beta[i]
        for j in range(n, -1, -1):
            if i == m and j == n:
                continue
            acc = NEG_INF
            for ds, dt in moves:
                if i + ds > m or j + dt > n:
                    continue
                nxt = beta[i + ds][j + dt]
                if nxt == NEG_INF:
                    continue
                lp = logprobs.get((source[i : i + ds], target[j : j + dt]))
                if lp is None:
                    continue
                acc = _logadd(acc, nxt + lp)
            row[j] = acc
    return beta


def _reachable_links(
    source: Pronunciation, target: Pronunciation, config: AlignmentConfig
) -> set[ChunkPair] | None:
    """Chunk pairs lying on at least one complete monotone path, or None
    when the pair is unalignable under the configuration."""
    m, n = len(source), len(target)
    moves = _moves(config)
    fwd = [[False] * (n + 1) for _ in range(m + 1)]
    fwd[0][0] = True
    for i in range(m + 1):
        for j in range(n + 1):
            if fwd[i][j]:
                continue
            for ds, dt in moves:
                if ds <= i and dt <= j and fwd[i - ds][j - dt]:
                    fwd[i][j] = True
                    break
    if not fwd[m][n]:
        return None
    bwd = [[False] * (n + 1) for _ in range(m + 1)]
    bwd[m][n] = True
    for i in range(m, -1, -1):
        for j in range(n, -1, -1):
            if bwd[i][j]:
                continue
            for ds, dt in moves:
                if i + ds <= m and j + dt <= n and bwd[i + ds][j + dt]:
                    bwd[i][j] = True
                    break
    links: set[ChunkPair] = set()
    for i in range(m + 1):
        for j in range(n + 1):
            if not fwd[i][j]:
                continue
            for ds, dt in moves:
                if i + ds <= m and j + dt <= n and bwd[i + ds][j + dt]:
                    links.add((source[i : i + ds], target[j : j + dt]))
    return links


def _grouped_pairs(paired) -> list[tuple[Pronunciation, Pronunciation, int, str]]:
    """Deduplicate identical pronunciation pairs, keeping multiplicities."""
    groups: dict[tuple[Pronunciation, Pronunciation], int] = {}
    names: dict[tuple[Pronunciation, Pronunciation], str] = {}
    for pair in paired.pairs:
        if not pair.source or not pair.target:
            raise AlignmentError(f"pair {pair.word!r} has an empty pronunciation")
        key = (pair.source, pair.target)
        groups[key] = groups.get(key, 0) + 1
        names.setdefault(key, pair.word)
    return [(s, t, w, names[(s, t)]) for (s, t), w in groups.items()]


def init_model(paired, config: AlignmentConfig) -> AlignmentModel:
    """Uniform distribution over chunk pairs co-occurring in any lattice."""
    if not paired.pairs:
        raise AlignmentError("cannot initialize a model from an empty paired lexicon")
    links: set[ChunkPair] = set()
    for source, target, _, word in _grouped_pairs(paired):
        pair_links = _reachable_links(source, target, config)
        if pair_links is None:
            raise UnalignableError(
                f"pair {word!r} cannot be aligned under the current configuration"
            )
        links.update(pair_links)
    by_source: dict[Chunk, list[Chunk]] = {}
    for s, t in sorted(links):
        by_source.setdefault(s, []).append(t)
    probs: dict[ChunkPair, float] = {}
    for s, targets in by_source.items():
        share = 1.0 / len(targets)
        for t in targets:
            probs[(s, t)] = share
    return AlignmentModel(probs=probs, provenance=paired.label)


def iter_em(paired, config: AlignmentConfig) -> Iterator[AlignmentModel]:
    """Run EM, yielding the model after each iteration's M-step.

    The log-likelihood history entry appended at iteration k is the corpus
    log-likelihood under the parameters *entering* that iteration, so the
    stored trace is non-decreasing.
    """
    groups = _grouped_pairs(paired)
    model = init_model(paired, config)
    moves = _moves(config)
    history: list[float] = []
    for _ in range(config.max_iterations):
        logprobs = {k: math.log(p) for k, p in model.probs.items() if p > 0.0}
        counts: dict[ChunkPair, float] = {}
        total_ll = 0.0
        for source, target, weight, word in groups:
            alpha = _forward(source, target, logprobs, moves)
            m, n = len(source), len(target)
            z = alpha[m][n]
            if z == NEG_INF:
                raise UnalignableError(f"pair {word!r} lost all alignment mass")
            total_ll += weight * z
            beta = _backward(source, target, logprobs, moves)
            for i in range(m + 1):
                for j in range(n + 1):
                    a = alpha[i][j]
                    if a == NEG_INF:
                        continue
                    for ds, dt in moves:
                        if i + ds > m or j + dt > n:
                            continue
                        b = beta[i + ds][j + dt]
                        if b == NEG_INF:
                            continue
                        key = (source[i : i + ds], target[j : j + dt])
                        lp = logprobs.get(key)
                        if lp is None:
                            continue
                        counts[key] = counts.get(key, 0.0) + weight * math.exp(a + lp + b - z)
        history.append(total_ll)
        totals: dict[Chunk, float] = {}
        for (s, _), c in counts.items():
            totals[s] = totals.get(s, 0.0) + c
        probs = {(s, t): c / totals[s] for (s, t), c in counts.items() if totals[s] > 0.0}
        model = AlignmentModel(
            probs=probs, log_likelihood_history=list(history), provenance=paired.label
        )
        yield model
        if len(history) >= 2:
            prev = history[-2]
            if (history[-1] - prev) / max(1.0, abs(prev)) < config.rel_tolerance:
                break


def train(paired, config: AlignmentConfig | None = None) -> AlignmentModel:
    """Train to convergence (or ``max_iterations``) and return the model."""
    config = config or AlignmentConfig()
    model = None
    for model in iter_em(paired, config):
        pass
    return model if model is not None else init_model(paired, config)


def pair_likelihood(
    model: AlignmentModel,
    source: Pronunciation,
    target: Pronunciation,
    config: AlignmentConfig | None = None,
) -> float:
    """Log of the total probability summed over all monotone chunkings;
    -inf when no chunking has positive mass."""
    config = config or AlignmentConfig()
    logprobs = {k: math.log(p) for k, p in model.probs.items() if p > 0.0}
    alpha = _forward(source, target, logprobs, _moves(config))
    return alpha[len(source)][len(target)]


def viterbi_align(
    model: AlignmentModel,
    source: Pronunciation,
    target: Pronunciation,
    config: AlignmentConfig | None = None,
) -> Alignment:
    """Maximum-probability chunking with deterministic tie-breaking.

    On equal scores the link with the shorter source chunk wins, then the
    shorter target chunk (move enumeration order enforces this).
    """
    config = config or AlignmentConfig()
    moves = _moves(config)
    logprobs = {k: math.log(p) for k, p in model.probs.items() if p > 0.0}
    m, n = len(source), len(target)
    best = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    back: list[list[tuple[int, int] | None]] = [[None] * (n + 1) for _ in range(m + 1)]
    best[0][0] = 0.0
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            top = NEG_INF
            move = None
            for ds, dt in moves:
                if ds > i or dt > j:
                    continue
                prev = best[i - ds][j - dt]
                if prev == NEG_INF:
                    continue
                lp = logprobs.get((source[i - ds : i], target[j - dt : j]))
                if lp is None:
                    continue
                score = prev + lp
                if score > top:
                    top = score
                    move = (ds, dt)
            best[i][j] = top
            back[i][j] = move
    if best[m][n] == NEG_INF:
        raise UnalignableError(
            f"no alignment with positive mass for {' '.join(source)!r} -> {' '.join(target)!r}"
        )
    links: list[ChunkPair] = []
    i, j = m, n
    while (i, j) != (0, 0):
        ds, dt = back[i][j]  # type: ignore[misc]
        links.append((source[i - ds : i], target[j - dt : j]))
        i, j = i - ds, j - dt
    links.reverse()
    return Alignment(links=tuple(links), score=best[m][n])


def format_chunk(chunk: Chunk) -> str:
    return " ".join(chunk) if chunk else "_"


def parse_chunk(text: str) -> Chunk:
    text = text.strip()
    if text == "_" or not text:
        return EMPTY_CHUNK
    return tuple(text.split())


def save_model(model: AlignmentModel, stream: IO[str]) -> None:
    """TSV rows ``source-chunk<TAB>target-chunk<TAB>probability`` (sorted);
    floats use the shortest round-trip decimal."""
    if model.provenance:
        stream.write(f"# provenance: {model.provenance}\n")
    for s, t in sorted(model.probs):
        stream.write(f"{format_chunk(s)}\t{format_chunk(t)}\t{model.probs[(s, t)]!r}\n")


def load_model(stream: IO[str]) -> AlignmentModel:
    probs: dict[ChunkPair, float] = {}
    provenance = ""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("provenance:"):
                provenance = body.split(":", 1)[1].strip()
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise AlignmentError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            prob = float(parts[2])
        except ValueError:
            raise AlignmentError(f"line {lineno}: bad probability {parts[2]!r}") from None
        probs[(parse_chunk(parts[0]), parse_chunk(parts[1]))] = prob
    return AlignmentModel(probs=probs, provenance=provenance)
