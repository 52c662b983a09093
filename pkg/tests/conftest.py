import pytest

from crossdep import control_grammar, default_lexicon, raising_grammar


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def control(lexicon):
    return control_grammar(lexicon)


@pytest.fixture(scope="session")
def raising(lexicon):
    return raising_grammar(lexicon)
