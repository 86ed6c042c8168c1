from __future__ import annotations

import io

import pytest

from accentminer.lexicon import (
    Lexicon,
    LexiconFormatError,
    SKIP_NOT_IN_SOURCE,
    SKIP_UNSYNTHESIZABLE,
    pair_lexicons,
    parse_dictionary,
    read_news_format,
    synthesize_dashed,
    write_news_format,
    write_skipped,
)

BEEP_SAMPLE = """\
;;; a BEEP-style header comment
ABACUS  AE B AH K AH S
ABOVE  AH B AH V
ABOVE(2)  AX B AH V
ICE  AY S
CREAM  K R IY M
MOTHER  M AH DH AX
IN  IH N
LAW  L AO
"""


def _arpabet_lex(table):
    return parse_dictionary(io.StringIO(BEEP_SAMPLE), "arpabet-dict", table)


def test_arpabet_dict_basics(arpabet_table):
    lex = _arpabet_lex(arpabet_table)
    assert len(lex["abacus"].pronunciations[0]) == 6
    assert lex["abacus"].primary == ("æ", "b", "ʌ", "k", "ʌ", "s")


def test_variant_suffix_folds_into_base_word(arpabet_table):
    lex = _arpabet_lex(arpabet_table)
    entry = lex["above"]
    assert len(entry.pronunciations) == 2
    assert entry.primary[0] == "ʌ"
    assert entry.pronunciations[1][0] == "ə"


def test_missing_pronunciation_is_an_error(arpabet_table):
    with pytest.raises(LexiconFormatError, match="line 2"):
        parse_dictionary(io.StringIO("GOOD  G UH D\nABACUS\n"), "arpabet-dict", arpabet_table)


def test_unknown_symbol_reports_line_and_symbol(arpabet_table):
    with pytest.raises(LexiconFormatError, match="line 1.*'QX'"):
        parse_dictionary(io.StringIO("WEIRD  QX IY\n"), "arpabet-dict", arpabet_table)


def test_ipa_lexicon_parsing():
    lex = parse_dictionary(io.StringIO("Theek\tʈʰiːk\nvery\tveri\n"), "ipa-lexicon")
    assert lex["theek"].primary == ("ʈʰ", "iː", "k")
    assert lex["very"].primary == ("v", "e", "r", "i")


def test_ipa_lexicon_rejects_bad_rows():
    with pytest.raises(LexiconFormatError, match="line 1"):
        parse_dictionary(io.StringIO("word-without-tab\n"), "ipa-lexicon")
    with pytest.raises(LexiconFormatError, match="line 2"):
        parse_dictionary(io.StringIO("ok\ta\nbad\tː\n"), "ipa-lexicon")


def test_duplicate_pronunciations_collapse():
    lex = parse_dictionary(io.StringIO("w\tab\nw\tab\nw\tba\n"), "ipa-lexicon")
    assert lex["w"].pronunciations == (("a", "b"), ("b", "a"))


def test_synthesize_dashed(arpabet_table):
    lex = _arpabet_lex(arpabet_table)
    assert synthesize_dashed("ice-cream", lex) == lex["ice"].primary + lex["cream"].primary
    expected = lex["mother"].primary + lex["in"].primary + lex["law"].primary
    assert synthesize_dashed("mother-in-law", lex) == expected
    assert synthesize_dashed("zzz-cream", lex) is None
    assert synthesize_dashed("ice--cream", lex) is None


def _target_lex():
    return parse_dictionary(
        io.StringIO("above\təbʌv\nice-cream\taɪskriːm\nmissing\tmɪs\n"), "ipa-lexicon"
    )


def test_pair_lexicons_buckets(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    paired = pair_lexicons(source, _target_lex())
    words = [pair.word for pair in paired.pairs]
    assert words == ["above", "ice-cream"]
    assert paired.pairs[0].source == source["above"].primary
    assert paired.pairs[1].source == source["ice"].primary + source["cream"].primary
    assert paired.skipped == [("missing", SKIP_NOT_IN_SOURCE)]


def test_pair_lexicons_unsynthesizable(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    target = parse_dictionary(io.StringIO("zzz-cream\tzkriːm\n"), "ipa-lexicon")
    paired = pair_lexicons(source, target)
    assert paired.pairs == []
    assert paired.skipped == [("zzz-cream", SKIP_UNSYNTHESIZABLE)]


def test_pair_conservation(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    target = _target_lex()
    paired = pair_lexicons(source, target)
    words = {pair.word for pair in paired.pairs} | {item.word for item in paired.skipped}
    assert words == set(target.words())
    assert len(paired.pairs) + len(paired.skipped) == len(target.words())


def test_cross_product_pairing(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    target = parse_dictionary(io.StringIO("above\təbʌv\nabove\tabʌv\n"), "ipa-lexicon")
    primary_only = pair_lexicons(source, target)
    assert len(primary_only.pairs) == 1
    full = pair_lexicons(source, target, cross_product=True)
    assert len(full.pairs) == 4  # 2 source variants x 2 target variants


def test_news_format_line_layout(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    target = parse_dictionary(io.StringIO("above\təbʌv\n"), "ipa-lexicon")
    paired = pair_lexicons(source, target)
    out = io.StringIO()
    write_news_format(paired, out)
    assert out.getvalue() == "ʌ b ʌ v\tə b ʌ v\n"


def test_news_format_roundtrip(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    paired = pair_lexicons(source, _target_lex())
    out = io.StringIO()
    write_news_format(paired, out)
    back = read_news_format(io.StringIO(out.getvalue()))
    assert [(p.source, p.target) for p in back.pairs] == [
        (p.source, p.target) for p in paired.pairs
    ]


def test_news_format_determinism(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    first, second = io.StringIO(), io.StringIO()
    write_news_format(pair_lexicons(source, _target_lex()), first)
    write_news_format(pair_lexicons(source, _target_lex()), second)
    assert first.getvalue() == second.getvalue()


def test_skipped_report_format(arpabet_table):
    source = _arpabet_lex(arpabet_table)
    paired = pair_lexicons(source, _target_lex())
    out = io.StringIO()
    write_skipped(paired, out)
    assert out.getvalue() == "missing\tnot-in-source\n"


def test_empty_lexicons_rejected():
    with pytest.raises(ValueError):
        pair_lexicons(Lexicon(), Lexicon())
