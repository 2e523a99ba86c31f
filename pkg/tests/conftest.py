import pytest

from kurosh.cli import parse_generators, parse_presentation, parse_word
from kurosh.words import Presentation


@pytest.fixture
def zz():
    return Presentation((1, 1))


@pytest.fixture
def zzz():
    return Presentation((1, 1, 1))


@pytest.fixture
def W(zz):
    def parse(text, pres=zz):
        return parse_word(pres, text)

    return parse


@pytest.fixture
def G(zz):
    def parse(text, pres=zz):
        return parse_generators(pres, text)

    return parse


@pytest.fixture
def P():
    return parse_presentation
