from __future__ import annotations

from importlib import resources

import pytest

from accentminer.phones import load_arpabet_table


@pytest.fixture(scope="session")
def arpabet_table():
    with resources.files("accentminer").joinpath("data/arpabet_ipa.tsv").open(
        encoding="utf-8"
    ) as stream:
        return load_arpabet_table(stream)


@pytest.fixture(scope="session")
def default_rulebook():
    from accentminer.rulebook import load_rulebook

    with resources.files("accentminer").joinpath("data/rulebook.txt").open(
        encoding="utf-8"
    ) as stream:
        return load_rulebook(stream)
