import random

import pytest

from nilalg.algebra import validate, zero_algebra
from nilalg.corpus import random_graded_nilpotent, truncated_polynomial


def graded_algebras(count=10, seed=1234):
    """Deterministic family of random graded-nilpotent test algebras."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        arity = 2 if len(out) < 7 else 3
        A = random_graded_nilpotent(rng, rng.randint(3, 6), arity=arity, max_weight=rng.randint(3, 6))
        if not A.is_zero():
            out.append(A)
    return out


def ternary_truncated():
    """Weights 1, 3, 5: mu(e1,e1,e1) = e2, mu(e1,e1,e2) = e3."""
    return validate(3, 3, [((1, 1, 1), 2, 1), ((1, 1, 2), 3, 1)], name="ternary135")


def sample_algebras():
    return [truncated_polynomial(2), truncated_polynomial(3), truncated_polynomial(4),
            zero_algebra(2, 2), zero_algebra(3, 1), ternary_truncated()] + graded_algebras()


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
