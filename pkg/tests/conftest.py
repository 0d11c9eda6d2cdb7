import random
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from hnflow.exact import linalg
from hnflow.exact.field import NumberField

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def K():
    """Q(sqrt 2) with the positive real embedding."""
    return NumberField([-2, 0, 1], [1, 2], "t")


@pytest.fixture
def r2(K):
    return K.gen()


def random_rational_matrix(rng: random.Random, d: int, bound: int = 5):
    while True:
        m = [[Fraction(rng.randint(-bound, bound), rng.choice((1, 2, 3))) for _ in range(d)]
             for _ in range(d)]
        if linalg.det(m) != 0:
            return m


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
