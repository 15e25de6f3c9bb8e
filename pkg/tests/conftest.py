import numpy as np
import pytest

from src.cyclofield.characters import AdditiveCharacter
from src.cyclofield.field import get_field
from src.quadform.datum import make_datum
from src.quadform.space import build_space
from src.quadform.stability import canonical_functional


@pytest.fixture
def f7():
    return get_field(7)


@pytest.fixture
def f9():
    return get_field(3, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def psi7(f7):
    return AdditiveCharacter(f7, 1)


@pytest.fixture
def unitary_m2(f7):
    """2A with n = 3, m = 2 over F_7 and the canonical functional diag(1, 2, 3)."""
    datum = make_datum("2A", 3, 2)
    space = build_space(datum, f7)
    return datum, space, canonical_functional(datum, space)


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    """Run CLI commands from a scratch directory so default outputs land there."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
