from __future__ import annotations

import io

import pytest
from hypothesis import given, strategies as st

from accentminer.phones import (
    PhoneError,
    UnknownArpabetSymbol,
    arpabet_to_ipa,
    convert_pronunciation,
    is_phone,
    load_arpabet_table,
    parse_ipa_string,
)


def test_modifiers_attach_left():
    assert parse_ipa_string("ʈʰiːk") == ("ʈʰ", "iː", "k")


def test_combining_bridge_is_one_phone():
    assert parse_ipa_string("d̪") == ("d̪",)


def test_orphan_modifier_rejected():
    with pytest.raises(PhoneError, match="orphan"):
        parse_ipa_string("ːa")


def test_unrecognized_codepoint_rejected():
    with pytest.raises(PhoneError, match="unrecognized"):
        parse_ipa_string("a%b")


def test_stress_marks_are_not_silently_attached():
    with pytest.raises(PhoneError):
        parse_ipa_string("ˈiːk")


def test_tie_bar_glues_affricate():
    assert parse_ipa_string("t͡ʃa") == ("t͡ʃ", "a")
    assert parse_ipa_string("ad͡ʒ") == ("a", "d͡ʒ")


def test_dangling_tie_bar_rejected():
    with pytest.raises(PhoneError, match="tie bar"):
        parse_ipa_string("t͡")
    with pytest.raises(PhoneError, match="tie bar"):
        parse_ipa_string("t͡ ʃ")


def test_spaces_delimit_phones():
    assert parse_ipa_string("ʈʰ iː k") == ("ʈʰ", "iː", "k")
    assert parse_ipa_string("  ") == ()


PHONE_POOL = ["a", "iː", "t", "t̪ʰ", "ʈ", "k", "t͡ʃ", "ə", "d̪", "ŋ", "ɜː", "ʃ"]


@given(st.lists(st.sampled_from(PHONE_POOL), min_size=0, max_size=10))
def test_tokenize_concatenate_roundtrip(phones):
    joined = "".join(phones)
    assert parse_ipa_string(joined) == tuple(phones)
    spaced = " ".join(phones)
    assert parse_ipa_string(spaced) == tuple(phones)


def test_every_pool_phone_is_valid():
    for phone in PHONE_POOL:
        assert is_phone(phone)
    assert not is_phone("ab")
    assert not is_phone("")


def test_arpabet_chart_values(arpabet_table):
    assert arpabet_to_ipa("TH", arpabet_table) == ("θ",)
    assert arpabet_to_ipa("AY1", arpabet_table) == ("a", "ɪ")
    assert arpabet_to_ipa("D", arpabet_table) == ("d",)


def test_stress_digits_stripped(arpabet_table):
    for symbol in ("AY", "AY0", "AY1", "AY2"):
        assert arpabet_to_ipa(symbol, arpabet_table) == ("a", "ɪ")


def test_unknown_symbol_is_an_error(arpabet_table):
    with pytest.raises(UnknownArpabetSymbol, match="ZZ"):
        arpabet_to_ipa("ZZ", arpabet_table)


def test_convert_pronunciation(arpabet_table):
    assert convert_pronunciation(["D", "IY"], arpabet_table) == ("d", "iː")
    assert convert_pronunciation([], arpabet_table) == ()
    assert convert_pronunciation(["TH", "IH", "NG"], arpabet_table) == ("θ", "ɪ", "ŋ")


def test_convert_reports_token_index(arpabet_table):
    with pytest.raises(UnknownArpabetSymbol, match="token 1"):
        convert_pronunciation(["D", "QQ"], arpabet_table)


def test_table_expansions_are_valid_phones(arpabet_table):
    for symbol, phones in arpabet_table.entries.items():
        assert phones, symbol
        for phone in phones:
            assert is_phone(phone), (symbol, phone)


def test_table_is_injective(arpabet_table):
    expansions = list(arpabet_table.entries.values())
    assert len(set(expansions)) == len(expansions)


def test_table_parser_rejects_bad_rows():
    with pytest.raises(PhoneError, match="line 2"):
        load_arpabet_table(io.StringIO("T\tt\nbroken-row\n"))
    with pytest.raises(PhoneError, match="duplicate"):
        load_arpabet_table(io.StringIO("T\tt\nT\tʈ\n"))


def test_table_parser_skips_comments_and_blanks():
    table = load_arpabet_table(io.StringIO("# a comment\n\nT\tt\n"))
    assert arpabet_to_ipa("T", table) == ("t",)
