"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]

_FLOAT_MSG = "floating point values are not accepted; use 'num/den' strings"


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or 'num/den' string to a Fraction.

    Floats are refused outright so that nothing inexact leaks in.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as a rational ({_FLOAT_MSG})")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r} ({_FLOAT_MSG})") from None
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _grlex_key(exps: Exponents):
    return (sum(exps), exps)


class MultiPoly:
    """Polynomial over Q in a fixed, ordered tuple of variables.

    ``terms`` maps exponent vectors to nonzero coefficients. Instances are
    treated as immutable; arithmetic always returns new objects.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Scalar] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean: dict[Exponents, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = to_rational(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponents, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.vars = variables
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, variables: Sequence[str], value: Scalar) -> "MultiPoly":
        variables = tuple(variables)
        c = to_rational(value)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None
        exps = tuple(1 if k == i else 0 for k in range(len(variables)))
        return cls._raw(variables, {exps: Fraction(1)})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None if not homogeneous (or zero)."""
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def homogeneous_part(self, k: int) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def truncate(self, max_degree: int) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def leading_term(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return other
            if other.is_constant():
                return MultiPoly.const(self.vars, other.constant_term())
            raise ValueError(f"variable lists differ: {self.vars} vs {other.vars}")
        return MultiPoly.const(self.vars, to_rational(other))

    def _align(self, other) -> tuple["MultiPoly", "MultiPoly"]:
        if isinstance(other, MultiPoly) and other.vars != self.vars and self.is_constant() \
                and not other.is_constant():
            return MultiPoly.const(other.vars, self.constant_term()), other
        return self, self._coerce(other)

    def __add__(self, other) -> "MultiPoly":
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, factor: Scalar) -> "MultiPoly":
        f = to_rational(factor)
        if not f:
            return MultiPoly.zero(self.vars)
        return MultiPoly._raw(self.vars, {e: c * f for e, c in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        a, b = self._align(other)
        if not a.terms or not b.terms:
            return MultiPoly.zero(a.vars)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw(a.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ArithmeticError if a remainder is left."""
        a, b = self._align(divisor)
        if b.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lb_e, lb_c = b.leading_term()
        rem = a
        quot: dict[Exponents, Fraction] = {}
        while rem.terms:
            le, lc = rem.leading_term()
            shift = tuple(x - y for x, y in zip(le, lb_e))
            if any(s < 0 for s in shift):
                raise ArithmeticError("division is not exact")
            c = lc / lb_c
            quot[shift] = c
            rem = rem - MultiPoly._raw(a.vars, {tuple(x + s for x, s in zip(e, shift)): v * c
                                               for e, v in b.terms.items()})
        return MultiPoly._raw(a.vars, quot)

    # -- calculus and substitution ---------------------------------------

    def diff(self, name: str) -> "MultiPoly":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return MultiPoly._raw(self.vars, out)

    def evaluate(self, point: Sequence[Scalar] | Mapping[str, Scalar]) -> Fraction:
        if isinstance(point, Mapping):
            values = [to_rational(point[v]) for v in self.vars]
        else:
            if len(point) != len(self.vars):
                raise ValueError("point has the wrong number of coordinates")
            values = [to_rational(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for v, k in zip(values, e):
                if k:
                    m *= v ** k
            total += m
        return total

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomial ``substitutions[i]`` for variable i."""
        if len(substitutions) != len(self.vars):
            raise ValueError("need one substitution per variable")
        target = substitutions[0].vars if substitutions else ()
        if any(s.vars != target for s in substitutions):
            raise ValueError("substituted polynomials must share a variable list")
        powers: list[dict[int, MultiPoly]] = [{} for _ in substitutions]

        def power(i: int, k: int) -> MultiPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = substitutions[i] ** k
            return cache[k]

        result = MultiPoly.zero(target)
        for e, c in self.terms.items():
            term = MultiPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    # -- comparison and printing -----------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            if self.vars == other.vars:
                return self.terms == other.terms
            if self.is_constant() and other.is_constant():
                return self.constant_term() == other.constant_term()
            return False
        try:
            c = to_rational(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def poly_arith(a: MultiPoly, b, op: str) -> MultiPoly:
    """Dispatch helper: ``op`` is one of add, sub, mul, scale."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def variables(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def gens(names: Iterable[str]) -> list[MultiPoly]:
    names = tuple(names)
    return [MultiPoly.var(names, v) for v in names]
