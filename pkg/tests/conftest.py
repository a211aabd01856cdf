from pathlib import Path

import pytest

from leril.anncorra import default_registry

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def go_dict_text() -> str:
    return (FIXTURES / "go.dict").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def go_tlg_text() -> str:
    return (FIXTURES / "go.tlg").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def registry():
    return default_registry()


EXPLICIT_LINE = "rAma_ne/k1->i phala/k2->j kATakara/kr:j->i pAnI/k2->i piyA::v:i"
DEFAULTED_LINE = "rAma_ne/k1->i phala/k2 kATakara/kr pAnI/k2 piyA::v:i"


@pytest.fixture(scope="session")
def explicit_line() -> str:
    return EXPLICIT_LINE


@pytest.fixture(scope="session")
def defaulted_line() -> str:
    return DEFAULTED_LINE
