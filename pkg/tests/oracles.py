"""Independent reference implementations used as test oracles.

These deliberately avoid the package's dynamic-programming recurrences:
chunkings are enumerated explicitly and edit distance is computed with its
own matrix, so agreement with the fast paths is meaningful evidence.
"""

from __future__ import annotations

from accentminer.aligner import AlignmentConfig


def enumerate_chunkings(source, target, config: AlignmentConfig):
    """Yield every monotone chunking as a list of (source-chunk, target-chunk)
    links, honoring the chunk-size and deletion settings."""

    def moves(i: int, j: int):
        if config.allow_target_deletion and j < len(target):
            yield 0, 1
        if config.allow_source_deletion and i < len(source):
            yield 1, 0
        for ds in range(1, config.max_source_chunk + 1):
            for dt in range(1, config.max_target_chunk + 1):
                if i + ds <= len(source) and j + dt <= len(target):
                    yield ds, dt

    def rec(i: int, j: int):
        if i == len(source) and j == len(target):
            yield []
            return
        for ds, dt in moves(i, j):
            link = (source[i : i + ds], target[j : j + dt])
            for rest in rec(i + ds, j + dt):
                yield [link] + rest

    yield from rec(0, 0)


def brute_force_likelihood(probs, source, target, config: AlignmentConfig) -> float:
    """Probability-domain sum over all chunkings of the product of link
    probabilities."""
    total = 0.0
    for chunking in enumerate_chunkings(source, target, config):
        p = 1.0
        for link in chunking:
            p *= probs.get(link, 0.0)
            if p == 0.0:
                break
        total += p
    return total


def brute_force_best(probs, source, target, config: AlignmentConfig):
    """(best probability, chunkings attaining it) by full enumeration."""
    best = 0.0
    argmax = []
    for chunking in enumerate_chunkings(source, target, config):
        p = 1.0
        for link in chunking:
            p *= probs.get(link, 0.0)
        if p > best:
            best, argmax = p, [chunking]
        elif p == best and p > 0.0:
            argmax.append(chunking)
    return best, argmax


def edit_distance(a, b) -> int:
    """Unit-cost Levenshtein distance with substitutions."""
    m, n = len(a), len(b)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            cur[j] = min(
                prev[j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
        prev = cur
    return prev[n]
