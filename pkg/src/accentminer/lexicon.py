"""Pronunciation dictionaries and the paired source/target lexicon.

Two input formats are supported:

* ``arpabet-dict`` -- BEEP/CMU style lines ``WORD  PH1 PH2 ...`` with
  ``WORD(2)`` variant suffixes and ``;;;`` / ``#`` comment lines;
* ``ipa-lexicon`` -- ``word<TAB>ipa-string`` lines.

Pairing walks the target lexicon, looks each word up on the source side,
synthesizes dashed words from their constituents when possible, and keeps
an explicit record of everything it had to skip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterator, NamedTuple

from .phones import (
    ArpabetTable,
    PhoneError,
    Pronunciation,
    UnknownArpabetSymbol,
    convert_pronunciation,
    parse_ipa_string,
)

SKIP_NOT_IN_SOURCE = "not-in-source"
SKIP_UNSYNTHESIZABLE = "unsynthesizable"

_VARIANT_RE = re.compile(r"^(?P<word>.+)\((?P<n>\d+)\)$")


class LexiconFormatError(ValueError):
    """Malformed dictionary input, annotated with its line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pronunciations: tuple[Pronunciation, ...]

    @property
    def primary(self) -> Pronunciation:
        return self.pronunciations[0]


class Lexicon:
    """Word-keyed pronunciation entries with deterministic (sorted) iteration."""

    def __init__(self, source_label: str = ""):
        self.source_label = source_label
        self._entries: dict[str, list[Pronunciation]] = {}

    def add(self, word: str, pron: Pronunciation) -> None:
        if not word:
            raise ValueError("empty word")
        if not pron:
            raise ValueError(f"empty pronunciation for {word!r}")
        variants = self._entries.setdefault(word, [])
        if pron not in variants:
            variants.append(pron)

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, word: str) -> LexiconEntry:
        return LexiconEntry(word, tuple(self._entries[word]))

    def primary(self, word: str) -> Pronunciation:
        return self._entries[word][0]

    def words(self) -> list[str]:
        return sorted(self._entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        for word in self.words():
            yield self[word]


class WordPair(NamedTuple):
    word: str
    source: Pronunciation
    target: Pronunciation


class SkippedWord(NamedTuple):
    word: str
    reason: str


@dataclass
class PairedLexicon:
    """Aligned (source pronunciation, target pronunciation) pairs per word."""

    pairs: list[WordPair] = field(default_factory=list)
    skipped: list[SkippedWord] = field(default_factory=list)
    label: str = ""

    def __len__(self) -> int:
        return len(self.pairs)


def parse_dictionary(stream: IO[str], format: str, table: ArpabetTable | None = None) -> Lexicon:
    """Parse a pronunciation dictionary in the given format.

    Words are case-folded to lowercase; ``WORD(2)``-style variants fold into
    the base word's pronunciation list in file order.
    """
    if format == "arpabet-dict":
        if table is None:
            raise ValueError("arpabet-dict format requires an ArpabetTable")
        return _parse_arpabet_dict(stream, table)
    if format == "ipa-lexicon":
        return _parse_ipa_lexicon(stream)
    raise ValueError(f"unknown dictionary format {format!r}")


def _fold_word(raw: str) -> str:
    match = _VARIANT_RE.match(raw)
    word = match.group("word") if match else raw
    return word.lower()


def _parse_arpabet_dict(stream: IO[str], table: ArpabetTable) -> Lexicon:
    lex = Lexicon(source_label="arpabet-dict")
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith(";;;") or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 2:
            raise LexiconFormatError(lineno, f"expected 'WORD PH1 PH2 ...', got {raw.rstrip()!r}")
        word = _fold_word(fields[0])
        try:
            pron = convert_pronunciation(fields[1:], table)
        except UnknownArpabetSymbol as exc:
            raise LexiconFormatError(lineno, str(exc)) from None
        lex.add(word, pron)
    return lex


def _parse_ipa_lexicon(stream: IO[str]) -> Lexicon:
    lex = Lexicon(source_label="ipa-lexicon")
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise LexiconFormatError(lineno, f"expected 'word<TAB>ipa', got {raw.rstrip()!r}")
        word = parts[0].strip().lower()
        try:
            pron = parse_ipa_string(parts[1].strip())
        except PhoneError as exc:
            raise LexiconFormatError(lineno, str(exc)) from None
        if not pron:
            raise LexiconFormatError(lineno, f"empty pronunciation for {word!r}")
        lex.add(word, pron)
    return lex


def synthesize_dashed(word: str, lex: Lexicon) -> Pronunciation | None:
    """Join constituent pronunciations of a dashed word, or None when any
    constituent is missing from ``lex``."""
    parts = word.split("-")
    joined: list[str] = []
    for part in parts:
        if not part or part not in lex:
            return None
        joined.extend(lex.primary(part))
    return tuple(joined)


def pair_lexicons(source: Lexicon, target: Lexicon, cross_product: bool = False) -> PairedLexicon:
    """Pair each target word with its source-side pronunciation.

    Primary pronunciations are paired by default; ``cross_product`` pairs
    every source variant with every target variant instead.  Dashed words
    absent from the source are synthesized from their constituents when
    possible; everything else lands in ``skipped`` with a reason.
    """
    if not len(source) or not len(target):
        raise ValueError("cannot pair empty lexicons")
    paired = PairedLexicon(label=f"{source.source_label}:{target.source_label}")
    for word in target.words():
        if word in source:
            source_prons = source[word].pronunciations
        elif "-" in word:
            synthesized = synthesize_dashed(word, source)
            if synthesized is None:
                paired.skipped.append(SkippedWord(word, SKIP_UNSYNTHESIZABLE))
                continue
            source_prons = (synthesized,)
        else:
            paired.skipped.append(SkippedWord(word, SKIP_NOT_IN_SOURCE))
            continue
        target_prons = target[word].pronunciations
        if not cross_product:
            source_prons = source_prons[:1]
            target_prons = target_prons[:1]
        for spron in source_prons:
            for tpron in target_prons:
                paired.pairs.append(WordPair(word, spron, tpron))
    return paired


def write_news_format(paired: PairedLexicon, stream: IO[str]) -> None:
    """One line per pair: source phones space-joined, TAB, target phones."""
    for pair in paired.pairs:
        stream.write(f"{' '.join(pair.source)}\t{' '.join(pair.target)}\n")


def read_news_format(stream: IO[str], label: str = "") -> PairedLexicon:
    """Read news-format pairs back; words are positional placeholders."""
    paired = PairedLexicon(label=label)
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(lineno, f"expected 'src<TAB>tgt', got {raw.rstrip()!r}")
        source = tuple(parts[0].split())
        target = tuple(parts[1].split())
        if not source or not target:
            raise LexiconFormatError(lineno, "empty side in news-format pair")
        paired.pairs.append(WordPair(f"pair-{lineno:06d}", source, target))
    return paired


def write_skipped(paired: PairedLexicon, stream: IO[str]) -> None:
    """Skipped-word report: ``word<TAB>reason`` per line."""
    for item in paired.skipped:
        stream.write(f"{item.word}\t{item.reason}\n")


def write_ipa_lexicon(lex: Lexicon, stream: IO[str]) -> None:
    """Serialize as ipa-lexicon lines, one per (word, variant)."""
    for entry in lex:
        for pron in entry.pronunciations:
            stream.write(f"{entry.word}\t{' '.join(pron)}\n")
