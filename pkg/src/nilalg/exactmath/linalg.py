"""Exact linear algebra over Q: row reduction, row-space membership, determinants."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import MultiPoly, to_rational

# 2**61 - 1, a Mersenne prime: products of two residues stay well inside Python ints.
DEFAULT_PRIME = (1 << 61) - 1

SparseRow = dict[int, Fraction]


class RationalMatrix:
    """Dense matrix of Fractions; immutable by convention."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        self.rows = tuple(tuple(to_rational(x) for x in r) for r in rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            other.ncols,
        )

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RationalMatrix[{self.nrows}x{self.ncols}]({body})"


def rref(M: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns. Zero rows are kept at the bottom."""
    A = [list(r) for r in M.rows]
    nrows, ncols = M.nrows, M.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return RationalMatrix(A, ncols), tuple(pivots)


def rank(M: RationalMatrix) -> int:
    return len(rref(M)[1])


def _leading_columns(B: RationalMatrix) -> list[tuple[int, int]]:
    """(row, pivot column) for every nonzero row; validates the RREF shape."""
    out = []
    last = -1
    for i, row in enumerate(B.rows):
        c = next((j for j, x in enumerate(row) if x), None)
        if c is None:
            continue
        if c <= last or row[c] != 1:
            raise ValueError("matrix is not in reduced row echelon form")
        last = c
        out.append((i, c))
    for i, c in out:
        if any(B.rows[k][c] for k, _ in out if k != i):
            raise ValueError("matrix is not in reduced row echelon form")
    return out


def row_space_coordinates(B: RationalMatrix, v: Sequence) -> dict[int, Fraction] | None:
    """Coefficients expressing v in the rows of RREF matrix B, or None if v is outside."""
    v = [to_rational(x) for x in v]
    if len(v) != B.ncols:
        raise ValueError(f"vector length {len(v)} does not match {B.ncols} columns")
    coeffs = {}
    residual = list(v)
    for i, c in _leading_columns(B):
        f = v[c]
        if f:
            coeffs[i] = f
            residual = [x - f * y for x, y in zip(residual, B.rows[i])]
    return coeffs if not any(residual) else None


def in_row_space(B: RationalMatrix, v: Sequence) -> bool:
    """Exact membership of v in the row space of B (B must be in RREF)."""
    return row_space_coordinates(B, v) is not None


# -- sparse incremental elimination -----------------------------------------


class RowEchelon:
    """Incrementally maintained RREF basis of sparse rational rows.

    Rows are dicts ``column -> Fraction``. Every stored row has a leading 1 at
    its pivot and zeros at all other pivots, so the basis stays reduced after
    every insertion and the final state does not depend on insertion order.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, SparseRow] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self.rows))

    def reduce(self, v: Mapping[int, Fraction]) -> tuple[SparseRow, SparseRow]:
        """Return (residual, coefficients) with v = residual + sum(coeff[p] * row[p])."""
        residual = {c: x for c, x in v.items() if x}
        coeffs: SparseRow = {}
        for p in sorted(set(residual) & self.rows.keys()):
            f = residual.get(p)
            if not f:
                continue
            coeffs[p] = f
            for c, x in self.rows[p].items():
                y = residual.get(c, 0) - f * x
                if y:
                    residual[c] = y
                else:
                    residual.pop(c, None)
        return residual, coeffs

    def add(self, v: Mapping[int, Fraction]) -> bool:
        """Insert v; returns True when it enlarged the row space."""
        residual, _ = self.reduce(v)
        if not residual:
            return False
        lead = min(residual)
        inv = 1 / residual[lead]
        new = {c: x * inv for c, x in residual.items()}
        for row in self.rows.values():
            f = row.get(lead)
            if f:
                for c, x in new.items():
                    y = row.get(c, 0) - f * x
                    if y:
                        row[c] = y
                    else:
                        del row[c]
        self.rows[lead] = new
        return True

    def contains(self, v: Mapping[int, Fraction]) -> bool:
        return not self.reduce(v)[0]

    def to_matrix(self) -> RationalMatrix:
        dense = []
        for p in self.pivots:
            r = [Fraction(0)] * self.ncols
            for c, x in self.rows[p].items():
                r[c] = x
            dense.append(r)
        return RationalMatrix(dense, self.ncols)


def _mod(x: Fraction, p: int) -> int:
    return x.numerator % p * pow(x.denominator % p, -1, p) % p


def independent_rows_mod_p(rows: Sequence[Mapping[int, Fraction]], p: int = DEFAULT_PRIME) -> list[int]:
    """Indices of a greedy maximal subset of rows independent modulo p.

    Independence modulo p implies independence over Q. A row with a
    denominator divisible by p is skipped.
    """
    basis: dict[int, dict[int, int]] = {}
    chosen = []
    for idx, row in enumerate(rows):
        try:
            v = {c: _mod(x, p) for c, x in row.items()}
        except ValueError:
            continue
        v = {c: x for c, x in v.items() if x}
        for piv in sorted(set(v) & basis.keys()):
            f = v.get(piv)
            if not f:
                continue
            for c, x in basis[piv].items():
                y = (v.get(c, 0) - f * x) % p
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)
        if not v:
            continue
        lead = min(v)
        inv = pow(v[lead], -1, p)
        v = {c: x * inv % p for c, x in v.items()}
        for row_b in basis.values():
            f = row_b.get(lead)
            if f:
                for c, x in v.items():
                    y = (row_b.get(c, 0) - f * x) % p
                    if y:
                        row_b[c] = y
                    else:
                        del row_b[c]
        basis[lead] = v
        chosen.append(idx)
    return chosen


def sparse_rref(rows: Iterable[Mapping[int, Fraction]], ncols: int, prescreen: bool = False) -> RowEchelon:
    """Exact RREF of a list of sparse rows.

    ``prescreen`` inserts the rows found independent modulo a prime first,
    which keeps pivot rows short while the dependent rows are reduced; every
    remaining row is still reduced exactly, so the result is the same.
    """
    rows = list(rows)
    ech = RowEchelon(ncols)
    order = range(len(rows))
    if prescreen:
        first = independent_rows_mod_p(rows)
        seen = set(first)
        order = first + [i for i in range(len(rows)) if i not in seen]
    for i in order:
        ech.add(rows[i])
    return ech


# -- polynomial matrices ----------------------------------------------------


def _common_vars(M: Sequence[Sequence]) -> tuple[str, ...]:
    for row in M:
        for x in row:
            if isinstance(x, MultiPoly) and not x.is_constant():
                return x.vars
    for row in M:
        for x in row:
            if isinstance(x, MultiPoly):
                return x.vars
    return ()


def _as_poly_matrix(M: Sequence[Sequence]) -> list[list[MultiPoly]]:
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant requires a square matrix")
    vs = _common_vars(M)
    out = []
    for row in M:
        prow = []
        for x in row:
            if isinstance(x, MultiPoly):
                prow.append(x if x.vars == vs else MultiPoly.const(vs, 0) + x)
            else:
                prow.append(MultiPoly.const(vs, to_rational(x)))
        out.append(prow)
    return out


def det(M: Sequence[Sequence], method: str = "bareiss") -> MultiPoly:
    """Exact determinant of a square matrix of polynomials (or rationals)."""
    A = _as_poly_matrix(M)
    if method == "bareiss":
        return _det_bareiss(A)
    if method == "cofactor":
        return _det_cofactor(A)
    raise ValueError(f"unknown determinant method {method!r}")


def _det_bareiss(A: list[list[MultiPoly]]) -> MultiPoly:
    n = len(A)
    vs = _common_vars(A)
    if n == 0:
        return MultiPoly.const(vs, 1)
    A = [list(r) for r in A]
    sign = 1
    prev = MultiPoly.const(vs, 1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(vs)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    result = A[n - 1][n - 1]
    return result if sign > 0 else -result


def _det_cofactor(A: list[list[MultiPoly]]) -> MultiPoly:
    n = len(A)
    vs = _common_vars(A)
    memo: dict[tuple[int, tuple[int, ...]], MultiPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == n:
            return MultiPoly.const(vs, 1)
        key = (row, cols)
        if key not in memo:
            total = MultiPoly.zero(vs)
            for k, c in enumerate(cols):
                if A[row][c].is_zero():
                    continue
                term = A[row][c] * minor(row + 1, cols[:k] + cols[k + 1:])
                total = total + term if k % 2 == 0 else total - term
            memo[key] = total
        return memo[key]

    return minor(0, tuple(range(n)))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    """Product of matrices whose entries support + and * (polynomials or rationals)."""
    if A and len(A[0]) != len(B):
        raise ValueError("shape mismatch")
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(m):
            acc = None
            for a, brow in zip(row, B):
                b = brow[j]
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc)
        out.append(new)
    return out


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> RationalMatrix:
    """Integer matrix with determinant +-1 built from elementary row operations."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        f = rng.randint(-2, 2)
        A[i] = [x + f * y for x, y in zip(A[i], A[j])]
        if rng.random() < 0.2:
            A[i], A[j] = A[j], A[i]
    return RationalMatrix(A, n)
