"""Finite-dimensional symmetric d-linear algebras over Q.

Elements with indeterminate coordinates (:class:`SymbolicElement`) let every
identity be decided as exact vanishing of polynomials, which is sound because
Q is infinite.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .exactmath import MultiPoly, matmul, to_rational
from .exactmath.poly import format_rational
from . import trees as tr

Key = tuple[int, ...]


class SymmetryError(ValueError):
    """Raised when a raw tensor assigns different values to permuted inputs."""


@dataclass(frozen=True)
class MultilinearAlgebra:
    """Symmetric structure tensor; indices are 0-based internally.

    ``table`` maps a non-decreasing input tuple to ``{output: value}``.
    Build instances with :func:`validate`.
    """

    arity: int
    dim: int
    table: Mapping[Key, Mapping[int, Fraction]]
    basis: tuple[str, ...] = ()
    name: str = ""

    def entry(self, inputs: Sequence[int], output: int) -> Fraction:
        return self.table.get(tuple(sorted(inputs)), {}).get(output, Fraction(0))

    def entries(self) -> list[tuple[Key, int, Fraction]]:
        """Normalized entries (0-based), sorted."""
        return [(k, o, v) for k in sorted(self.table) for o, v in sorted(self.table[k].items())]

    def is_zero(self) -> bool:
        return not self.table

    def __hash__(self):
        return hash((self.arity, self.dim, tuple(self.entries())))

    def __eq__(self, other):
        if not isinstance(other, MultilinearAlgebra):
            return NotImplemented
        return (self.arity, self.dim, self.entries()) == (other.arity, other.dim, other.entries())


def validate(arity: int, dim: int, entries: Iterable, basis: Sequence[str] | None = None,
             name: str = "") -> MultilinearAlgebra:
    """Normalize raw tensor entries into a symmetric algebra.

    ``entries`` holds ``(inputs, output, value)`` triples with 1-based indices.
    Permuted inputs with equal values are merged; a conflict raises
    :class:`SymmetryError` naming both input tuples.
    """
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if basis is not None and len(basis) != dim:
        raise ValueError(f"basis has {len(basis)} names for dimension {dim}")
    seen: dict[tuple[Key, int], tuple[Key, Fraction]] = {}
    table: dict[Key, dict[int, Fraction]] = {}
    for inputs, output, value in entries:
        inputs = tuple(int(i) for i in inputs)
        if len(inputs) != arity:
            raise ValueError(f"entry {inputs} has {len(inputs)} inputs, expected {arity}")
        for i in inputs + (int(output),):
            if not 1 <= i <= dim:
                raise ValueError(f"index {i} out of range [1, {dim}] in entry {inputs}->{output}")
        value = to_rational(value)
        key = tuple(sorted(i - 1 for i in inputs))
        out = int(output) - 1
        prev = seen.get((key, out))
        if prev is not None:
            if prev[1] != value:
                raise SymmetryError(
                    f"symmetry violation: mu{prev[0]} -> e{output} is {format_rational(prev[1])} "
                    f"but mu{inputs} -> e{output} is {format_rational(value)}"
                )
            continue
        seen[(key, out)] = (inputs, value)
        if value:
            table.setdefault(key, {})[out] = value
    return MultilinearAlgebra(arity, dim, table, tuple(basis or ()), name)


def zero_algebra(arity: int, dim: int) -> MultilinearAlgebra:
    return validate(arity, dim, [])


# -- symbolic elements --------------------------------------------------------


@dataclass(frozen=True)
class SymbolicElement:
    """Algebra element whose coordinates are polynomials in a shared variable list."""

    coords: tuple[MultiPoly, ...]

    @property
    def vars(self) -> tuple[str, ...]:
        return self.coords[0].vars if self.coords else ()

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: "SymbolicElement") -> "SymbolicElement":
        return SymbolicElement(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "SymbolicElement") -> "SymbolicElement":
        return SymbolicElement(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "SymbolicElement":
        return SymbolicElement(tuple(-a for a in self.coords))

    def scale(self, c) -> "SymbolicElement":
        return SymbolicElement(tuple(a.scale(c) for a in self.coords))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coords)

    def degree(self) -> int:
        return max((a.degree() for a in self.coords), default=-1)

    def evaluate(self, point) -> tuple[Fraction, ...]:
        return tuple(a.evaluate(point) for a in self.coords)

    def substitute(self, subs: Sequence[MultiPoly]) -> "SymbolicElement":
        return SymbolicElement(tuple(a.compose(subs) for a in self.coords))

    def truncate(self, max_degree: int) -> "SymbolicElement":
        return SymbolicElement(tuple(a.truncate(max_degree) for a in self.coords))

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


def generic_elements(dim: int, names: Sequence[str] = ("x",)) -> tuple[SymbolicElement, ...]:
    """Generic elements named e.g. x, y with coordinates x1..xn, y1..yn in one ring."""
    variables = tuple(f"{p}{i}" for p in names for i in range(1, dim + 1))
    return tuple(
        SymbolicElement(tuple(MultiPoly.var(variables, f"{p}{i}") for i in range(1, dim + 1)))
        for p in names
    )


def constant_element(variables: Sequence[str], values: Sequence) -> SymbolicElement:
    return SymbolicElement(tuple(MultiPoly.const(variables, v) for v in values))


def zero_element(dim: int, variables: Sequence[str]) -> SymbolicElement:
    return SymbolicElement(tuple(MultiPoly.zero(variables) for _ in range(dim)))


def basis_element(dim: int, k: int, variables: Sequence[str]) -> SymbolicElement:
    """The k-th (0-based) basis vector as a constant symbolic element."""
    return constant_element(variables, [int(i == k) for i in range(dim)])


@lru_cache(maxsize=None)
def _distinct_perms(key: Key) -> tuple[Key, ...]:
    return tuple(sorted(set(permutations(key))))


def mu(A: MultilinearAlgebra, args: Sequence[SymbolicElement]) -> SymbolicElement:
    """The d-linear product of ``args``."""
    if len(args) != A.arity:
        raise ValueError(f"mu takes {A.arity} arguments, got {len(args)}")
    if any(len(a) != A.dim for a in args):
        raise ValueError("argument dimension does not match the algebra")
    vs = args[0].vars
    for a in args[1:]:
        if a.vars != vs:
            raise ValueError("arguments live over different variable lists")
    out = [MultiPoly.zero(vs) for _ in range(A.dim)]
    diagonal = all(a is args[0] for a in args)
    for key, outputs in A.table.items():
        if diagonal:
            coeff = math.factorial(A.arity)
            for m in Counter(key).values():
                coeff //= math.factorial(m)
            prod = MultiPoly.const(vs, coeff)
            for i in key:
                prod = prod * args[0].coords[i]
        else:
            prod = MultiPoly.zero(vs)
            for perm in _distinct_perms(key):
                term = MultiPoly.const(vs, 1)
                for arg, i in zip(args, perm):
                    c = arg.coords[i]
                    if c.is_zero():
                        term = None
                        break
                    term = term * c
                if term is not None:
                    prod = prod + term
        if prod.is_zero():
            continue
        for o, v in outputs.items():
            out[o] = out[o] + prod.scale(v)
    return SymbolicElement(tuple(out))


def ad_pow(A: MultilinearAlgebra, x: SymbolicElement, k: int, y: SymbolicElement) -> SymbolicElement:
    """Ad_x^k(y), with Ad_x(y) = mu(x, ..., x, y)."""
    if k < 1:
        raise ValueError("ad_pow needs k >= 1")
    xs = [x] * (A.arity - 1)
    for _ in range(k):
        y = mu(A, xs + [y])
    return y


def t_series(A: MultilinearAlgebra, x: SymbolicElement, q_max: int) -> list[SymbolicElement]:
    """[T_1(x), ..., T_{q_max}(x)] from the composition recursion.

    Entry i of the returned list is T_{i+1}. Ordered compositions that are
    permutations of each other give equal products by symmetry of mu, so each
    sorted composition is evaluated once and weighted by its permutation count.
    """
    d = A.arity
    zero = zero_element(A.dim, x.vars)
    T: list[SymbolicElement] = [x]
    for q in range(2, q_max + 1):
        if (q - 1) % (d - 1):
            T.append(zero)
            continue
        total = zero
        for comp in _sorted_compositions(q, d):
            args = [T[i - 1] for i in comp]
            if any(a.is_zero() for a in args):
                continue
            mult = math.factorial(d)
            for m in Counter(comp).values():
                mult //= math.factorial(m)
            total = total + mu(A, args).scale(mult)
        T.append(total)
    return T


def _sorted_compositions(q: int, parts: int) -> list[tuple[int, ...]]:
    return sorted({tuple(sorted(c)) for c in tr.compositions(q, parts)})


def T(A: MultilinearAlgebra, q: int, x: SymbolicElement) -> SymbolicElement:
    if q < 1:
        raise ValueError("T_q needs q >= 1")
    return t_series(A, x, q)[q - 1]


def g_map(A: MultilinearAlgebra, x: SymbolicElement) -> SymbolicElement:
    """g(x) = x - mu(x, ..., x)."""
    return x - mu(A, [x] * A.arity)


def gamma(A: MultilinearAlgebra, y: SymbolicElement, D: int) -> SymbolicElement:
    """Truncated formal inverse of g: T_1(y) + ... + T_D(y)."""
    if D < 1:
        raise ValueError("degree bound must be >= 1")
    total = zero_element(A.dim, y.vars)
    for t in t_series(A, y, D):
        total = total + t
    return total


def dg(A: MultilinearAlgebra, x: SymbolicElement, z: SymbolicElement) -> SymbolicElement:
    """Linearization of g at x in direction z: z - d * Ad_x(z)."""
    return z - ad_pow(A, x, 1, z).scale(A.arity)


def dt_series(A: MultilinearAlgebra, y: SymbolicElement, t: SymbolicElement, q_max: int) -> list[SymbolicElement]:
    """[dT_1(y;t), ..., dT_{q_max}(y;t)], the parts of T_q(y + t) linear in t."""
    d = A.arity
    Ts = t_series(A, y, q_max)
    zero = zero_element(A.dim, y.vars)
    dT: list[SymbolicElement] = [t]
    for q in range(2, q_max + 1):
        if (q - 1) % (d - 1):
            dT.append(zero)
            continue
        total = zero
        for comp in tr.compositions(q, d):
            for k in range(d):
                args = [dT[i - 1] if pos == k else Ts[i - 1] for pos, i in enumerate(comp)]
                if any(a.is_zero() for a in args):
                    continue
                total = total + mu(A, args)
        dT.append(total)
    return dT


def dgamma(A: MultilinearAlgebra, y: SymbolicElement, t: SymbolicElement, D: int) -> SymbolicElement:
    """Linearization of the truncated inverse at y in direction t."""
    if D < 1:
        raise ValueError("degree bound must be >= 1")
    total = zero_element(A.dim, y.vars)
    for part in dt_series(A, y, t, D):
        total = total + part
    return total


# -- nilpotence checkers ------------------------------------------------------


@dataclass
class NilReport:
    """Outcome of an index search.

    ``index`` is the minimal value within ``bound`` for which the identity
    holds; when it is None, ``witness`` describes a nonvanishing value at the
    bound. ``window`` records the range of degrees actually checked.
    """

    kind: str
    index: int | None
    bound: int
    witness: str | None = None
    window: tuple[int, int] | None = None
    details: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.index is not None


def ad_matrix(A: MultilinearAlgebra, x: SymbolicElement) -> list[list[MultiPoly]]:
    """Matrix of the linear map y -> Ad_x(y); column j is Ad_x(e_j)."""
    cols = [ad_pow(A, x, 1, basis_element(A.dim, j, x.vars)) for j in range(A.dim)]
    return [[cols[j].coords[i] for j in range(A.dim)] for i in range(A.dim)]


def _matrix_is_zero(M) -> bool:
    return all(e.is_zero() for row in M for e in row)


def engel_index(A: MultilinearAlgebra, n_max: int) -> NilReport:
    """Smallest n <= n_max with Ad_x^n = 0 for generic x."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    (x,) = generic_elements(A.dim, ("x",))
    M = ad_matrix(A, x)
    P = M
    for n in range(1, n_max + 1):
        if n > 1:
            P = matmul(P, M)
        if _matrix_is_zero(P):
            return NilReport("engel", n, n_max, window=(1, n))
    i, j = next((i, j) for i in range(A.dim) for j in range(A.dim) if not P[i][j].is_zero())
    return NilReport("engel", None, n_max, witness=f"Ad_x^{n_max}[{i + 1},{j + 1}] = {P[i][j]}",
                     window=(1, n_max))


def yagzhev_window(d: int, p: int) -> tuple[int, int]:
    return (p, d * (p - 1) + 1)


def yagzhev_index(A: MultilinearAlgebra, p_max: int, extra_bound: int | None = None) -> NilReport:
    """Smallest p <= p_max such that T_q(x) = 0 for all q in [p, d(p-1)+1].

    With ``extra_bound`` the vanishing of T_q is additionally confirmed for
    every q up to that bound once p is found (recorded in ``details``).
    """
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    d = A.arity
    (x,) = generic_elements(A.dim, ("x",))
    top = yagzhev_window(d, p_max)[1]
    if extra_bound:
        top = max(top, extra_bound)
    Ts = t_series(A, x, top)
    nonzero = [q for q in range(1, top + 1) if not Ts[q - 1].is_zero()]
    for p in range(2, p_max + 1):
        lo, hi = yagzhev_window(d, p)
        if all(q < lo or q > hi for q in nonzero):
            details = {"nonzero_T": [q for q in nonzero if q <= hi]}
            if extra_bound:
                details["extra_bound"] = extra_bound
                details["extra_ok"] = all(q < lo for q in nonzero)
            return NilReport("yagzhev", p, p_max, window=(lo, hi), details=details)
    lo, hi = yagzhev_window(d, p_max)
    q = max(q for q in nonzero if lo <= q <= hi)
    return NilReport("yagzhev", None, p_max, witness=f"T_{q}(x) = {Ts[q - 1]}", window=(lo, hi),
                     details={"nonzero_T": [q for q in nonzero if q <= hi]})


def evaluate_tree(A: MultilinearAlgebra, t: tr.Tree, assignment: Mapping[int, SymbolicElement],
                  cache: dict | None = None) -> SymbolicElement:
    """Value of a tree monomial with leaf label i replaced by ``assignment[i]``."""
    if cache is None:
        cache = {}
    if isinstance(t, int):
        return assignment[t]
    hit = cache.get(t)
    if hit is None:
        hit = mu(A, [evaluate_tree(A, c, assignment, cache) for c in t])
        cache[t] = hit
    return hit


def gerstenhaber_index(A: MultilinearAlgebra, n_max: int) -> NilReport:
    """Smallest n <= n_max such that every one-variable tree monomial with
    internal-node count in [n, d(n-1)+1] vanishes identically.

    A minimal subtree with at least n internal nodes has at most d(n-1)+1 of
    them, so vanishing on that window forces vanishing for every larger tree.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    d = A.arity
    (x,) = generic_elements(A.dim, ("x",))
    cache: dict = {}
    assignment = {0: x}
    vanish: dict[int, tr.Tree | None] = {}

    def first_nonzero(k: int):
        if k not in vanish:
            vanish[k] = None
            for shape in tr.shapes(d, tr.leaves_for_internal(d, k)):
                if not evaluate_tree(A, shape, assignment, cache).is_zero():
                    vanish[k] = shape
                    break
        return vanish[k]

    for n in range(1, n_max + 1):
        hi = d * (n - 1) + 1
        bad = next((k for k in range(n, hi + 1) if first_nonzero(k) is not None), None)
        if bad is None:
            return NilReport("gerstenhaber", n, n_max, window=(n, hi))
    hi = d * (n_max - 1) + 1
    k = next(k for k in range(n_max, hi + 1) if first_nonzero(k) is not None)
    shape = vanish[k]
    value = evaluate_tree(A, shape, assignment, cache)
    return NilReport("gerstenhaber", None, n_max,
                     witness=f"{tr.to_string(shape)} -> {value}", window=(n_max, hi))


def theorem_bound(d: int, p: int) -> int:
    """Engel index guaranteed for Yagzhev nilindex p: d * floor((p-2)/(d-1)) + 1."""
    return d * ((p - 2) // (d - 1)) + 1
