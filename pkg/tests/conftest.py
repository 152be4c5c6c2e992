import pytest

from mahler.config import set_precision


@pytest.fixture(autouse=True)
def _reset_precision():
    yield
    set_precision("double")
