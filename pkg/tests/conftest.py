import json
from pathlib import Path

import numpy as np
import pytest

from kforms import IntervalSet

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def locked():
    return json.loads((FIXTURES / "locked_constants.json").read_text())


def random_interval(rng: np.random.Generator, q: int, max_len: int | None = None) -> IntervalSet:
    top = max_len if max_len is not None else q
    return IntervalSet(int(rng.integers(-q, q)), int(rng.integers(1, top + 1)))
