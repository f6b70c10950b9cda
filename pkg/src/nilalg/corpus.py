"""Built-in example algebras and random test algebras."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import MultilinearAlgebra, validate


def truncated_polynomial(m: int) -> MultilinearAlgebra:
    """Tr(m): basis e_1..e_m with mu(e_i, e_j) = e_{i+j} when i + j <= m."""
    entries = [((i, j), i + j, 1) for i in range(1, m + 1) for j in range(i, m + 1) if i + j <= m]
    return validate(2, m, entries, name=f"tr{m}")


def cube_algebra(d: int = 3) -> MultilinearAlgebra:
    """One-dimensional algebra with mu(e_1, ..., e_1) = e_1, i.e. H(X) = X^d."""
    return validate(d, 1, [((1,) * d, 1, 1)], name=f"cube{d}")


BUILTINS = {
    "tr2": lambda: truncated_polynomial(2),
    "tr3": lambda: truncated_polynomial(3),
    "tr4": lambda: truncated_polynomial(4),
    "cube3": lambda: cube_algebra(3),
}


def builtin(name: str) -> MultilinearAlgebra:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in algebra {name!r}; choose from {sorted(BUILTINS)}") from None


def random_graded_nilpotent(rng: random.Random, dim: int, arity: int = 2, max_weight: int = 4,
                            density: float = 0.6, coeff_range: int = 3) -> MultilinearAlgebra:
    """Random positively graded algebra: weights w_i >= 1 and
    mu(e_{i_1}, ..., e_{i_d}) lies in the span of the e_k with w_k = sum of w_{i_j}.

    Such algebras are nilpotent, so every nilpotence index exists.
    Weights start at 1 and rise by steps of at most d-1, capped at ``max_weight``.
    """
    # small steps between weights leave many products allowed
    weights = [1]
    for _ in range(dim - 1):
        weights.append(min(max_weight, weights[-1] + rng.randint(0, arity - 1)))
    entries = []
    for key in combinations_with_replacement(range(dim), arity):
        w = sum(weights[i] for i in key)
        for k in range(dim):
            if weights[k] == w and rng.random() < density:
                c = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 2))
                if c:
                    entries.append((tuple(i + 1 for i in key), k + 1, c))
    return validate(arity, dim, entries, name=f"graded{weights}")
