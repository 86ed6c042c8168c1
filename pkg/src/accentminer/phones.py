"""IPA phone handling: tokenization, validation and ARPAbet conversion.

A phone is stored as a plain ``str`` holding one base IPA symbol plus any
attached modifiers (length mark, aspiration, dental bridge, tie bar, ...).
All text is normalized to NFC at the boundary so that precomposed and
decomposed spellings of the same segment cannot split counts downstream.
"""

from __future__ import annotations

import unicodedata
from typing import IO, Iterable

Pronunciation = tuple[str, ...]

# Tie bars glue the following base symbol into the current phone (affricates).
TIE_BARS = frozenset({"͡", "͜"})

# Spacing modifier letters accepted as left-attaching diacritics.  Stress
# marks are deliberately absent: the transcriptions this toolkit consumes
# are unstressed, so a stray stress mark should fail loudly.
_SPACING_MODIFIERS = frozenset(
    {
        "ʰ",  # aspiration
        "ʱ",  # breathy aspiration
        "ʲ",  # palatalization
        "ʷ",  # labialization
        "ʼ",  # ejective
        "ː",  # length
        "ˑ",  # half length
        "ˠ",  # velarization
        "ˡ",  # lateral release
        "ˤ",  # pharyngealization
        "ⁿ",  # nasal release
    }
)

_DELIMITERS = frozenset({" ", "\t"})


class PhoneError(ValueError):
    """Raised for text that cannot be tokenized into well-formed phones."""


class UnknownArpabetSymbol(KeyError):
    """Raised when an ARPAbet token has no row in the loaded table."""

    def __init__(self, symbol: str, index: int | None = None):
        super().__init__(symbol)
        self.symbol = symbol
        self.index = index

    def __str__(self) -> str:
        where = "" if self.index is None else f" (token {self.index})"
        return f"unknown ARPAbet symbol {self.symbol!r}{where}"


def normalize_ipa(text: str) -> str:
    """Project-wide canonical composition form (NFC)."""
    return unicodedata.normalize("NFC", text)


def _is_modifier(ch: str) -> bool:
    return unicodedata.category(ch) == "Mn" or ch in _SPACING_MODIFIERS


def _is_base(ch: str) -> bool:
    return unicodedata.category(ch) in ("Ll", "Lo", "Lu")


def parse_ipa_string(text: str) -> Pronunciation:
    """Tokenize an IPA string into phones.

    Modifiers attach to the preceding base symbol; a tie bar additionally
    pulls the next base symbol into the same phone.  Spaces and tabs
    optionally delimit phones.  Concatenating the result reproduces the
    normalized input minus delimiters.
    """
    text = normalize_ipa(text)
    phones: list[str] = []
    current: list[str] = []
    pending_tie = False
    for pos, ch in enumerate(text):
        if ch in _DELIMITERS:
            if pending_tie:
                raise PhoneError(f"dangling tie bar before delimiter at position {pos}")
            if current:
                phones.append("".join(current))
                current = []
        elif _is_modifier(ch):
            if not current:
                raise PhoneError(f"orphan modifier {ch!r} at position {pos}")
            current.append(ch)
            if ch in TIE_BARS:
                pending_tie = True
        elif _is_base(ch):
            if pending_tie:
                current.append(ch)
                pending_tie = False
            else:
                if current:
                    phones.append("".join(current))
                current = [ch]
        else:
            raise PhoneError(f"unrecognized codepoint {ch!r} (U+{ord(ch):04X}) at position {pos}")
    if pending_tie:
        raise PhoneError("dangling tie bar at end of input")
    if current:
        phones.append("".join(current))
    return tuple(phones)


def is_phone(text: str) -> bool:
    """True iff ``text`` tokenizes back to exactly one phone equal to itself."""
    try:
        return parse_ipa_string(text) == (text,)
    except PhoneError:
        return False


class ArpabetTable:
    """ARPAbet symbol to IPA phone-sequence mapping, loaded from a data file.

    Lookups are total over the loaded inventory: an unlisted symbol raises
    instead of passing through silently.
    """

    def __init__(self, entries: dict[str, Pronunciation]):
        self.entries = dict(entries)

    def __contains__(self, symbol: str) -> bool:
        return strip_stress(symbol) in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def strip_stress(symbol: str) -> str:
    """Drop a trailing ARPAbet stress digit (0/1/2)."""
    if symbol and symbol[-1] in "012":
        return symbol[:-1]
    return symbol


def load_arpabet_table(stream: IO[str]) -> ArpabetTable:
    """Read ``SYMBOL<TAB>ipa`` rows; ``#`` starts a comment, blanks ignored."""
    entries: dict[str, Pronunciation] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise PhoneError(f"line {lineno}: expected 'SYMBOL<TAB>ipa', got {raw!r}")
        symbol, ipa = parts[0].strip(), parts[1].strip()
        if symbol in entries:
            raise PhoneError(f"line {lineno}: duplicate symbol {symbol!r}")
        entries[symbol] = parse_ipa_string(ipa)
    return ArpabetTable(entries)


def arpabet_to_ipa(symbol: str, table: ArpabetTable) -> Pronunciation:
    """Convert one ARPAbet token (stress digit stripped) to its IPA phones."""
    base = strip_stress(symbol)
    try:
        return table.entries[base]
    except KeyError:
        raise UnknownArpabetSymbol(symbol) from None


def convert_pronunciation(tokens: Iterable[str], table: ArpabetTable) -> Pronunciation:
    """Convert an ARPAbet token sequence to a pronunciation."""
    phones: list[str] = []
    for index, token in enumerate(tokens):
        try:
            phones.extend(arpabet_to_ipa(token, table))
        except UnknownArpabetSymbol as exc:
            raise UnknownArpabetSymbol(exc.symbol, index) from None
    return tuple(phones)
