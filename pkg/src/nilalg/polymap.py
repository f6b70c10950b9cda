"""Polynomial self-maps of Q^n and their link to symmetric multilinear algebras.

A homogeneous map H of degree d corresponds to the symmetric d-linear
operation mu with H(X) = mu(X, ..., X); the map F = Id - H is then the map g
of the algebra, and its formal inverse is the series of T_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import algebra as alg
from .exactmath import MultiPoly, det, variables


@dataclass(frozen=True)
class PolyMap:
    """Self-map of affine n-space; coordinate i is a polynomial in ``coords[i].vars``."""

    coords: tuple[MultiPoly, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a polynomial map needs at least one coordinate")
        vs = self.coords[0].vars
        if any(c.vars != vs for c in self.coords):
            raise ValueError("coordinates use different variable lists")
        if len(vs) != len(self.coords):
            raise ValueError(f"{len(self.coords)} coordinates but {len(vs)} variables")

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.coords[0].vars

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        return PolyMap(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __add__(self, other: "PolyMap") -> "PolyMap":
        return PolyMap(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def identity_map(n: int, prefix: str = "X") -> PolyMap:
    vs = variables(prefix, n)
    return PolyMap(tuple(MultiPoly.var(vs, v) for v in vs))


def rename(F: PolyMap, prefix: str) -> PolyMap:
    """Same map written in variables prefix1..prefixn."""
    vs = variables(prefix, F.n)
    return PolyMap(tuple(MultiPoly(vs, c.terms) for c in F.coords))


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """F o G, written in G's variables."""
    if F.n != G.n:
        raise ValueError("maps act on spaces of different dimension")
    return PolyMap(tuple(c.compose(G.coords) for c in F.coords))


def homogeneous_degree(H: PolyMap) -> int | None:
    """Common degree of all nonzero coordinates; None for H = 0.

    Raises ValueError when some coordinate is not homogeneous or degrees differ.
    """
    degs = set()
    for i, c in enumerate(H.coords):
        if c.is_zero():
            continue
        k = c.homogeneous_degree()
        if k is None:
            raise ValueError(f"coordinate {i + 1} is not homogeneous: {c}")
        degs.add(k)
    if len(degs) > 1:
        raise ValueError(f"coordinates have different degrees {sorted(degs)}")
    return degs.pop() if degs else None


def polarize(H: PolyMap, degree: int | None = None) -> alg.MultilinearAlgebra:
    """Symmetric d-linear algebra with mu(X, ..., X) = H(X).

    mu(X_1, ..., X_d) = (1/d!) * sum over nonempty S of (-1)^(d-|S|) H(sum_{i in S} X_i),
    applied to basis vectors.
    """
    d = homogeneous_degree(H)
    if d is None:
        if degree is None:
            raise ValueError("H = 0: pass the intended degree explicitly")
        d = degree
    elif degree is not None and degree != d:
        raise ValueError(f"H has degree {d}, not {degree}")
    if d < 2:
        raise ValueError(f"H must have degree >= 2, got {d}")
    n = H.n
    entries = []
    for key in combinations_with_replacement(range(n), d):
        values = [Fraction(0)] * n
        for size in range(1, d + 1):
            sign = -1 if (d - size) % 2 else 1
            for S in combinations(range(d), size):
                point = [0] * n
                for k in S:
                    point[key[k]] += 1
                for i, c in enumerate(H.coords):
                    if not c.is_zero():
                        values[i] += sign * c.evaluate(point)
        for i, v in enumerate(values):
            v /= math.factorial(d)
            if v:
                entries.append((tuple(k + 1 for k in key), i + 1, v))
    return alg.validate(d, n, entries)


def depolarize(A: alg.MultilinearAlgebra, prefix: str = "X") -> PolyMap:
    """H(X) = mu(X, ..., X)."""
    vs = variables(prefix, A.dim)
    X = alg.SymbolicElement(tuple(MultiPoly.var(vs, v) for v in vs))
    return PolyMap(alg.mu(A, [X] * A.arity).coords)


def split_identity(F: PolyMap) -> tuple[PolyMap, int | None]:
    """Write F = Id - H with H homogeneous of degree >= 2; returns (H, degree)."""
    ident = PolyMap(tuple(MultiPoly.var(F.vars, v) for v in F.vars))
    H = ident - F
    try:
        d = homogeneous_degree(H)
    except ValueError as exc:
        raise ValueError(f"map is not of the form Id - H with H homogeneous: {exc}") from None
    if d is not None and d < 2:
        raise ValueError(f"map is not of the form Id - H: H has degree {d}")
    return H, d


def jacobian(F: PolyMap) -> list[list[MultiPoly]]:
    return [[c.diff(v) for v in F.vars] for c in F.coords]


def jacobian_det(F: PolyMap) -> MultiPoly:
    return det(jacobian(F))


def formal_inverse(F: PolyMap, D: int, prefix: str = "Y") -> PolyMap:
    """Truncated inverse sum_{j<=D} T_j(Y) of F = Id - H."""
    if D < 1:
        raise ValueError("degree bound must be >= 1")
    H, d = split_identity(F)
    if d is None:
        return identity_map(F.n, prefix)
    A = polarize(H)
    vs = variables(prefix, F.n)
    Y = alg.SymbolicElement(tuple(MultiPoly.var(vs, v) for v in vs))
    return PolyMap(alg.gamma(A, Y, D).coords)


@dataclass
class AutomorphismReport:
    status: str  # EXACT, PASS (identity up to degree D), FAIL
    degree_bound: int
    residual_fg: list[str]
    residual_gf: list[str]

    @property
    def ok(self) -> bool:
        return self.status in ("EXACT", "PASS")


def verify_automorphism(F: PolyMap, G: PolyMap, D: int) -> AutomorphismReport:
    """Check F o G = Id and G o F = Id modulo terms of degree > D."""
    fg = compose(F, G)
    gf = compose(G, F)
    res_fg = fg - PolyMap(tuple(MultiPoly.var(G.vars, v) for v in G.vars))
    res_gf = gf - PolyMap(tuple(MultiPoly.var(F.vars, v) for v in F.vars))
    low_fg = [c.truncate(D) for c in res_fg.coords]
    low_gf = [c.truncate(D) for c in res_gf.coords]
    if res_fg.is_zero() and res_gf.is_zero():
        status = "EXACT"
    elif all(c.is_zero() for c in low_fg + low_gf):
        status = "PASS"
    else:
        status = "FAIL"
    return AutomorphismReport(status, D, [str(c) for c in low_fg], [str(c) for c in low_gf])


@dataclass
class JacobianTheoremReport:
    verdict: str  # PASS, FAIL, INCONCLUSIVE
    arity: int
    yagzhev: int | None
    engel: int | None
    bound: int | None
    jacobian_det: str
    details: dict = field(default_factory=dict)


def jacobian_theorem_check(A: alg.MultilinearAlgebra, p_max: int = 8) -> JacobianTheoremReport:
    """Yagzhev nil => Engel within d*floor((p-2)/(d-1))+1, plus det J_F for F = Id - H."""
    d = A.arity
    F = identity_map(A.dim) - depolarize(A)
    jdet = str(jacobian_det(F))
    y = alg.yagzhev_index(A, p_max)
    if not y.found:
        return JacobianTheoremReport("INCONCLUSIVE", d, None, None, None, jdet,
                                     {"yagzhev_witness": y.witness})
    bound = alg.theorem_bound(d, y.index)
    e = alg.engel_index(A, bound)
    details = {}
    if e.found:
        lhs = (d - 1) * (e.index - 1) + 1
        rhs = d * (d - 1) * ((y.index - 2) // (d - 1)) + 1
        details["degree_inequality"] = [lhs, rhs]
    else:
        details["engel_witness"] = e.witness
    return JacobianTheoremReport("PASS" if e.found else "FAIL", d, y.index, e.index, bound, jdet, details)
