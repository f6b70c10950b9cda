"""Multilinear components of the free symmetric d-ary algebra.

Elements are rational combinations of canonical trees (see :mod:`nilalg.trees`).
The consequence ideal of identities ``T_j(x) = 0`` is spanned component by
component: top-level instances ``T_j^mult(a_1, ..., a_j)`` with tree arguments,
plus single-node wraps ``node(b, w_1, ..., w_{d-1})`` of ideal elements ``b``
of smaller degree.

Components can be taken over distinct labels (the plain multilinear
component) or over colored leaves. A coloring identifies labels that may be
permuted freely; for an element invariant under those permutations,
membership in the ideal is equivalent to membership of its colored image in
the colored ideal, because the ideal is stable under relabeling and averaging
over the group is a projection onto invariants in characteristic zero. The
colored components are tiny, which is what makes degree 7+ checks cheap.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Mapping, Sequence

from . import trees as tr
from .exactmath import RationalMatrix, RowEchelon, format_rational, sparse_rref
from .trees import Tree

DEFAULT_MAX_TREES = 25_000
# Insert rows independent mod a prime first. RREF is unique, so this only changes speed.
USE_PRESCREEN = True
X_COLOR, T_COLOR = 0, 1


class ResourceLimitExceeded(RuntimeError):
    pass


class MultilinearElement:
    """Finite rational combination of canonical trees of one degree."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[Tree, Fraction] | None = None, degree: int | None = None):
        clean = {t: Fraction(c) for t, c in (terms or {}).items() if c}
        degs = {tr.degree(t) for t in clean}
        if len(degs) > 1:
            raise ValueError(f"mixed degrees {sorted(degs)} in one element")
        if degs:
            found = degs.pop()
            if degree is not None and degree != found:
                raise ValueError(f"declared degree {degree} but trees have degree {found}")
            degree = found
        self.terms = clean
        self.degree = degree

    @classmethod
    def tree(cls, t: Tree, coeff=1) -> "MultilinearElement":
        return cls({t: Fraction(coeff)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MultilinearElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "MultilinearElement") -> "MultilinearElement":
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = out.get(t, 0) + c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return MultilinearElement(out, self.degree if self.degree is not None else other.degree)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultilinearElement":
        c = Fraction(c)
        return MultilinearElement({t: v * c for t, v in self.terms.items()}, self.degree)

    def relabel(self, mapping: Mapping[int, int]) -> "MultilinearElement":
        out: dict[Tree, Fraction] = {}
        for t, c in self.terms.items():
            s = tr.relabel(t, mapping)
            out[s] = out.get(s, 0) + c
        return MultilinearElement(out, self.degree)

    def sorted_terms(self) -> list[tuple[Tree, Fraction]]:
        return sorted(self.terms.items(), key=lambda tc: tr.tree_key(tc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{format_rational(c)}*{tr.to_string(t)}" for t, c in self.sorted_terms())

    __repr__ = __str__


def _as_element(a) -> MultilinearElement:
    return a if isinstance(a, MultilinearElement) else MultilinearElement.tree(a)


def graft(*factors) -> MultilinearElement:
    """The product node(a_1, ..., a_d), extended multilinearly to elements."""
    partial: dict[tuple, Fraction] = {(): Fraction(1)}
    for f in factors:
        f = _as_element(f)
        nxt: dict[tuple, Fraction] = {}
        for kids, c in partial.items():
            for t, v in f.terms.items():
                k = kids + (t,)
                nxt[k] = nxt.get(k, 0) + c * v
        partial = nxt
    out: dict[Tree, Fraction] = {}
    for kids, c in partial.items():
        t = tr.node(*kids)
        out[t] = out.get(t, 0) + c
    return MultilinearElement(out)


def _block_partitions(mask: int, parts: int, d: int):
    """Unordered partitions of the bit set ``mask`` into ``parts`` blocks whose
    sizes are all admissible tree sizes."""
    if parts == 1:
        if (mask.bit_count() - 1) % (d - 1) == 0:
            yield (mask,)
        return
    low = mask & -mask
    rest = mask ^ low
    sub = rest
    while True:
        block = sub | low
        if (block.bit_count() - 1) % (d - 1) == 0 and block != mask:
            for tail in _block_partitions(mask ^ block, parts - 1, d):
                yield (block,) + tail
        if sub == 0:
            break
        sub = (sub - 1) & rest


def t_mult(d: int, args: Sequence) -> MultilinearElement:
    """T_j^mult(a_1, ..., a_j) for trees or elements a_i.

    Computed from the label-set recursion: the linearization on a slot set S
    is the sum over ordered d-tuples of disjoint nonempty slot sets covering
    S of node(lin(S_1), ..., lin(S_d)). Ordered tuples of distinct blocks come
    in groups of d! with equal canonical value, so unordered partitions are
    summed and scaled by d!.
    """
    j = len(args)
    if j == 0:
        raise ValueError("need at least one argument")
    if (j - 1) % (d - 1):
        return MultilinearElement()
    elems = [_as_element(a) for a in args]
    # slots holding equal arguments are interchangeable, so memoize on the
    # multiset of argument classes rather than on the slot set itself
    first_index: dict = {}
    klass = []
    for a in args:
        key = a if not isinstance(a, MultilinearElement) else id(a)
        klass.append(first_index.setdefault(key, len(first_index)))
    memo: dict[tuple, MultilinearElement] = {}
    fact = math.factorial(d)

    def lin(mask: int) -> MultilinearElement:
        key = tuple(sorted(klass[i] for i in range(j) if mask >> i & 1))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if mask.bit_count() == 1:
            res = elems[mask.bit_length() - 1]
        else:
            res = MultilinearElement()
            for blocks in _block_partitions(mask, d, d):
                res = res + graft(*(lin(b) for b in blocks))
            res = res.scale(fact)
        memo[key] = res
        return res

    return lin((1 << j) - 1)


def polarize_T(d: int, q: int) -> MultilinearElement:
    """Full linearization T_q^mult(1, ..., q), normalized so that T_q(x) = T_q^mult(x, ..., x) / q!."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return t_mult(d, list(range(1, q + 1)))


def engel_element(d: int, n: int) -> MultilinearElement:
    """Full linearization in x of Ad_x^n(t), with t carried by label n(d-1)+1.

    Sum over every assignment of labels 1..n(d-1) to the x slots of the right
    comb mu(x, ..., x, mu(x, ..., Ad_x(t))).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = n * (d - 1)
    out: dict[Tree, Fraction] = {}
    for perm in permutations(range(1, k + 1)):
        t = tr.right_comb(d, perm, k + 1)
        out[t] = out.get(t, 0) + 1
    return MultilinearElement(out)


def engel_element_colored(d: int, n: int) -> MultilinearElement:
    """Colored image of :func:`engel_element`: x slots colored 0, t colored 1."""
    k = n * (d - 1)
    comb = tr.right_comb(d, [X_COLOR] * k, T_COLOR)
    return MultilinearElement({comb: Fraction(math.factorial(k))})


def symmetrized_shape(d: int, shape: Tree, q: int | None = None) -> MultilinearElement:
    """Sum of all bijective labelings of ``shape`` by 1..q (collapsed canonically)."""
    n = tr.degree(shape)
    if q is not None and q != n:
        raise ValueError(f"shape has {n} leaves, not {q}")
    if tr.arity_of(shape) not in (None, d):
        raise ValueError("shape arity does not match d")
    out: dict[Tree, Fraction] = {}
    for perm in permutations(range(1, n + 1)):
        t = _fill(shape, iter(perm))
        out[t] = out.get(t, 0) + 1
    return MultilinearElement(out)


def symmetrized_shape_colored(shape: Tree) -> MultilinearElement:
    n = tr.degree(shape)
    flat = tr.relabel(shape, {c: X_COLOR for c in set(tr.leaves(shape))})
    return MultilinearElement({flat: Fraction(math.factorial(n))})


def _fill(t: Tree, labels) -> Tree:
    if isinstance(t, int):
        return next(labels)
    return tr.node(*(_fill(c, labels) for c in t))


def t_mult_colored(d: int, q: int, color: int = X_COLOR) -> MultilinearElement:
    """Colored image of T_q^mult: all q slots filled by one color."""
    return t_mult(d, [color] * q)


# -- colorings ---------------------------------------------------------------


def collapse(e: MultilinearElement, colors: Mapping[int, int]) -> MultilinearElement:
    """Image of a labeled element under label -> color."""
    return e.relabel(colors)


def invariance_defect(e: MultilinearElement, colors: Mapping[int, int]) -> str | None:
    """None when e is invariant under color-preserving relabelings, else a reason.

    Invariance holds iff, for each colored shape, the labeled trees of e over
    it form a full orbit carrying one common coefficient.
    """
    by_shape: dict[Tree, list[Fraction]] = {}
    for t, c in e.terms.items():
        by_shape.setdefault(tr.relabel(t, colors), []).append(c)
    for shape, coeffs in by_shape.items():
        if len(set(coeffs)) != 1:
            return f"coefficients differ within the orbit of {tr.to_string(shape)}"
        if len(coeffs) != tr.orbit_size(shape):
            return f"orbit of {tr.to_string(shape)} is only partly present"
    return None


def colors_for(kind: str, q: int) -> dict[int, int]:
    """Standard colorings: 'symmetric' (all labels alike) or 'engel' (last label apart)."""
    if kind == "symmetric":
        return {i: X_COLOR for i in range(1, q + 1)}
    if kind == "engel":
        return {i: (T_COLOR if i == q else X_COLOR) for i in range(1, q + 1)}
    raise ValueError(f"unknown coloring {kind!r}")


# -- ideal spanning ------------------------------------------------------------


def _check_generators(d: int, J: Iterable[int]) -> tuple[int, ...]:
    J = tuple(sorted(set(int(j) for j in J)))
    for j in J:
        if j < 1 or (j - 1) % (d - 1):
            raise ValueError(f"generator degree {j} is not congruent to 1 mod {d - 1}")
    return J


@lru_cache(maxsize=None)
def _component(d: int, M: tuple[int, ...], J: tuple[int, ...]) -> tuple[tuple[Tree, ...], RowEchelon, int]:
    """(columns, RREF basis, number of spanning rows) of the ideal over leaf multiset M."""
    columns = tr.colored_trees(d, M)
    index = {t: i for i, t in enumerate(columns)}
    rows: list[dict[int, Fraction]] = []

    def push(e: MultilinearElement):
        if e:
            rows.append({index[t]: c for t, c in e.terms.items()})

    size = len(M)
    for j in J:
        if j > size:
            continue
        for forest in tr.forests(d, M, j):
            push(t_mult(d, forest))
    low = min(J, default=size + 1)
    for M0 in tr.sub_multisets(M):
        if not (low <= len(M0) < size) or (len(M0) - 1) % (d - 1):
            continue
        sub_cols, sub_ech, _ = _component(d, M0, J)
        if not sub_ech.rank:
            continue
        basis = [MultilinearElement({sub_cols[c]: x for c, x in sub_ech.rows[p].items()})
                 for p in sub_ech.pivots]
        for forest in tr.forests(d, tr.multiset_difference(M, M0), d - 1):
            for b in basis:
                push(graft(b, *forest))
    return columns, sparse_rref(rows, len(columns), prescreen=USE_PRESCREEN), len(rows)


@dataclass(frozen=True)
class IdealBasis:
    """Degree-q component of the ideal generated by the T_j identities, j in J.

    ``colors`` is None for the plain multilinear component over labels 1..q;
    otherwise it maps each label to a color and the basis lives over colored trees.
    """

    d: int
    q: int
    generators: tuple[int, ...]
    colors: tuple[tuple[int, int], ...] | None
    columns: tuple[Tree, ...]
    echelon: RowEchelon
    spanning_rows: int

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def reduced_dim(self) -> int:
        return len(self.columns)

    @property
    def space_dim(self) -> int:
        return tr.count_labeled_trees(self.d, self.q)

    def matrix(self) -> RationalMatrix:
        return self.echelon.to_matrix()

    def row_elements(self) -> list[MultilinearElement]:
        return [MultilinearElement({self.columns[c]: x for c, x in self.echelon.rows[p].items()})
                for p in self.echelon.pivots]

    def coloring(self) -> dict[int, int] | None:
        return dict(self.colors) if self.colors is not None else None


def ideal_span(d: int, q: int, J: Iterable[int], colors: Mapping[int, int] | None = None,
               max_trees: int | None = None) -> IdealBasis:
    """RREF basis of the degree-q component of the ideal generated by {T_j : j in J}.

    Generator degrees above q contribute nothing and are ignored.
    """
    if d < 2 or q < 1:
        raise ValueError("need d >= 2 and q >= 1")
    J = _check_generators(d, J)
    if colors is None:
        M = tuple(range(1, q + 1))
        frozen = None
    else:
        if sorted(colors) != list(range(1, q + 1)):
            raise ValueError("coloring must assign a color to each label 1..q")
        M = tuple(sorted(colors.values()))
        frozen = tuple(sorted(colors.items()))
    n_cols = len(tr.colored_trees(d, M))
    if max_trees is not None and n_cols > max_trees:
        raise ResourceLimitExceeded(f"component has {n_cols} trees, cap is {max_trees}")
    columns, ech, nrows = _component(d, M, tuple(j for j in J if j <= q))
    return IdealBasis(d, q, J, frozen, columns, ech, nrows)


# -- membership --------------------------------------------------------------


@dataclass
class Membership:
    member: bool
    certificate: dict[int, Fraction] | None
    verified: bool
    digest: str | None

    def __bool__(self):
        return self.member


def _vector(B: IdealBasis, e: MultilinearElement) -> dict[int, Fraction]:
    index = {t: i for i, t in enumerate(B.columns)}
    out = {}
    for t, c in e.terms.items():
        i = index.get(t)
        if i is None:
            raise ValueError(f"tree {tr.to_string(t)} is not in the component")
        out[i] = c
    return out


def certificate_digest(B: IdealBasis, vector: Mapping[int, Fraction], coeffs: Mapping[int, Fraction]) -> str:
    payload = {
        "d": B.d,
        "q": B.q,
        "J": list(B.generators),
        "colors": [list(x) for x in B.colors] if B.colors is not None else None,
        "target": [[tr.to_string(B.columns[c]), format_rational(x)] for c, x in sorted(vector.items())],
        "rows": [
            [format_rational(coeffs[p]),
             [[tr.to_string(B.columns[c]), format_rational(x)] for c, x in sorted(B.echelon.rows[p].items())]]
            for p in sorted(coeffs)
        ],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def verify_certificate(B: IdealBasis, vector: Mapping[int, Fraction], coeffs: Mapping[int, Fraction]) -> bool:
    """Recompute sum(coeff * row) from scratch and compare with the target."""
    total: dict[int, Fraction] = {}
    for p, f in coeffs.items():
        for c, x in B.echelon.rows[p].items():
            total[c] = total.get(c, 0) + f * x
    total = {c: x for c, x in total.items() if x}
    return total == {c: x for c, x in vector.items() if x}


def contains_reduced(B: IdealBasis, image: MultilinearElement) -> Membership:
    """Membership of an element already expressed in B's columns."""
    if image.degree is not None and image.degree != B.q:
        raise ValueError(f"degree {image.degree} does not match component degree {B.q}")
    v = _vector(B, image)
    residual, coeffs = B.echelon.reduce(v)
    if residual:
        return Membership(False, None, False, None)
    ok = verify_certificate(B, v, coeffs)
    return Membership(ok, coeffs, ok, certificate_digest(B, v, coeffs))


def contains(B: IdealBasis, e: MultilinearElement) -> Membership:
    """Exact membership of a labeled element in the ideal component B.

    For a colored B the element must be invariant under the color-preserving
    relabelings; its colored image is then tested.
    """
    if e.degree is not None and e.degree != B.q:
        raise ValueError(f"degree {e.degree} does not match component degree {B.q}")
    if B.colors is None:
        return contains_reduced(B, e)
    colors = B.coloring()
    defect = invariance_defect(e, colors)
    if defect:
        raise ValueError(f"element is not invariant under the coloring: {defect}")
    return contains_reduced(B, collapse(e, colors))


# -- evaluation in finite-dimensional algebras ------------------------------------


def evaluate_element(A, e: MultilinearElement, assignment: Mapping[int, object]):
    """Evaluate a (labeled or colored) element in a finite-dimensional algebra."""
    from .algebra import evaluate_tree, zero_element

    first = next(iter(assignment.values()))
    total = zero_element(A.dim, first.vars)
    cache: dict = {}
    for t, c in e.terms.items():
        total = total + evaluate_tree(A, t, assignment, cache).scale(c)
    return total


def relatively_free_algebra(d: int, J: Iterable[int], top: int, marked: bool = False):
    """Free symmetric d-ary algebra modulo the T-ideal of {T_j : j in J}, truncated.

    Generators: x, and with ``marked`` also t. Products of total degree above
    ``top`` or of degree 2 or more in t are set to zero; both spans are ideals.

    The colored components of :func:`ideal_span` are exactly the homogeneous
    parts of the T-ideal in this algebra, since generators are instantiated
    on arbitrary monomials. Each part contributes its non-pivot monomials as
    basis vectors, and any monomial is reduced to normal form against the
    RREF rows. The result satisfies T_j = 0 for j in J and is the most
    general algebra with these generators and truncations that does.
    """
    from .algebra import validate

    J = _check_generators(d, J)
    basis: list[Tree] = []
    normal: dict[Tree, dict[int, Fraction]] = {}
    kinds = ("symmetric", "engel") if marked else ("symmetric",)
    for k in range(1, top + 1):
        if (k - 1) % (d - 1):
            continue
        for kind in kinds:
            B = ideal_span(d, k, J, colors=colors_for(kind, k))
            free = [c for c in range(len(B.columns)) if c not in B.echelon.rows]
            slot = {c: len(basis) + i for i, c in enumerate(free)}
            basis += [B.columns[c] for c in free]
            for c, t in enumerate(B.columns):
                residual, _ = B.echelon.reduce({c: Fraction(1)})
                normal[t] = {slot[i]: x for i, x in residual.items()}
    entries = []
    for key in combinations_with_replacement(range(len(basis)), d):
        product = tr.node(*(basis[i] for i in key))
        if tr.degree(product) > top or tr.leaves(product).count(T_COLOR) > 1:
            continue
        for out, x in normal[product].items():
            entries.append((tuple(i + 1 for i in key), out + 1, x))
    gens = "x,t" if marked else "x"
    return validate(d, len(basis), entries, basis=[tr.to_string(t) for t in basis],
                    name=f"free{d}<{gens}>/T{list(J)}/deg<={top}")


# -- theorem verification ------------------------------------------------------------


@dataclass
class CheckReport:
    """One certified membership check.

    ``space_dim`` is the size of the multilinear component over distinct
    labels; ``reduced_dim`` and ``ideal_rank`` refer to the component actually
    eliminated (colored by the symmetry of the target element).
    """

    check: str
    d: int
    J: list[int]
    degree: int
    verdict: str
    p: int | None = None
    n: int | None = None
    space_dim: int | None = None
    reduced_dim: int | None = None
    ideal_rank: int | None = None
    certificate_digest: str | None = None
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "CheckReport":
        return cls(**dict(data))


@dataclass
class ClaimReport:
    check: str
    verdict: str
    subchecks: list[CheckReport]
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ClaimReport":
        data = dict(data)
        data["subchecks"] = [CheckReport.from_dict(s) for s in data["subchecks"]]
        return cls(**data)


def theorem_parameters(d: int, p: int) -> tuple[int, list[int], int]:
    """(n, generator window J, Engel degree) for Yagzhev nilindex p."""
    if d < 2 or p < 2:
        raise ValueError("need d >= 2 and p >= 2")
    n = d * ((p - 2) // (d - 1)) + 1
    J = [j for j in range(p, d * (p - 1) + 2) if (j - 1) % (d - 1) == 0]
    return n, J, n * (d - 1) + 1


def _membership_check(check: str, d: int, q: int, J: Sequence[int], kind: str,
                      colored: MultilinearElement, labeled_builder, max_trees: int,
                      flat_limit: int, require_labeled: bool = True) -> CheckReport:
    start = time.perf_counter()
    space_dim = tr.count_labeled_trees(d, q)
    report = CheckReport(check=check, d=d, J=list(J), degree=q, verdict="NOT_ATTEMPTED",
                         space_dim=space_dim)
    if require_labeled and space_dim > max_trees:
        report.details["reason"] = f"component has {space_dim} trees, cap is {max_trees}"
        report.wall_time = time.perf_counter() - start
        return report
    colors = colors_for(kind, q)
    try:
        B = ideal_span(d, q, J, colors=colors, max_trees=max_trees)
    except ResourceLimitExceeded as exc:
        report.details["reason"] = str(exc)
        report.wall_time = time.perf_counter() - start
        return report
    report.reduced_dim = B.reduced_dim
    report.ideal_rank = B.rank
    report.details["spanning_rows"] = B.spanning_rows
    if labeled_builder is not None and space_dim <= max_trees:
        labeled = labeled_builder()
        defect = invariance_defect(labeled, colors)
        report.details["labeled_terms"] = len(labeled)
        report.details["labeled_invariant"] = defect is None
        report.details["labeled_image_matches"] = collapse(labeled, colors) == colored
        if defect is not None or collapse(labeled, colors) != colored:
            report.verdict = "ERROR"
            report.wall_time = time.perf_counter() - start
            return report
        if space_dim <= flat_limit:
            flat = ideal_span(d, q, J)
            report.details["flat_ideal_rank"] = flat.rank
            report.details["flat_member"] = contains(flat, labeled).member
    result = contains_reduced(B, colored)
    report.verdict = "PASS" if result.member else "FAIL"
    report.certificate_digest = result.digest
    if result.member:
        report.details["certificate_rows"] = len(result.certificate)
    if "flat_member" in report.details and report.details["flat_member"] != result.member:
        report.verdict = "ERROR"
        report.details["reason"] = "flat and reduced routes disagree"
    report.wall_time = time.perf_counter() - start
    return report


def verify_engel(d: int, n: int, J: Sequence[int], max_trees: int = DEFAULT_MAX_TREES,
                 flat_limit: int = 200, check: str = "engel") -> CheckReport:
    q = n * (d - 1) + 1
    r = _membership_check(check, d, q, J, "engel", engel_element_colored(d, n),
                          lambda: engel_element(d, n), max_trees, flat_limit)
    r.n = n
    return r


def verify_main_theorem(d: int, p: int, max_trees: int = DEFAULT_MAX_TREES, probe: bool = True,
                        flat_limit: int = 200) -> CheckReport:
    """Certify that the n-Engel identity follows from T_q = 0 on the window p <= q <= d(p-1)+1."""
    start = time.perf_counter()
    n, J, q = theorem_parameters(d, p)
    report = verify_engel(d, n, J, max_trees, flat_limit, check="main_theorem")
    report.p = p
    if probe and n > 1 and report.verdict == "PASS":
        prev = verify_engel(d, n - 1, [j for j in J if j <= (n - 1) * (d - 1) + 1], max_trees,
                            flat_limit, check="minimality_probe")
        report.details["minimality_probe"] = {"n": n - 1, "verdict": prev.verdict,
                                              "degree": prev.degree}
    report.wall_time = time.perf_counter() - start
    return report


def _shape_check(d: int, shape: Tree, J: Sequence[int], max_trees: int, flat_limit: int,
                 require_labeled: bool) -> CheckReport:
    q = tr.degree(shape)
    builder = (lambda: symmetrized_shape(d, shape, q)) if require_labeled else None
    r = _membership_check(f"shape {tr.to_string(shape)}", d, q, J, "symmetric",
                          symmetrized_shape_colored(shape), builder, max_trees, flat_limit,
                          require_labeled=require_labeled)
    r.details["shape"] = tr.to_string(shape)
    r.details["internal_nodes"] = tr.internal_count(shape)
    return r


def _t_check(d: int, q: int, J: Sequence[int], max_trees: int, flat_limit: int) -> CheckReport:
    r = _membership_check(f"T_{q}", d, q, J, "symmetric", t_mult_colored(d, q),
                          lambda: polarize_T(d, q), max_trees, flat_limit)
    return r


def _run(task):
    fn, args = task
    return fn(*args)


def _map(tasks, workers: int):
    if workers <= 1:
        return [_run(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run, tasks))


def _aggregate(verdicts: Iterable[str]) -> str:
    verdicts = list(verdicts)
    for v in ("ERROR", "FAIL", "NOT_ATTEMPTED"):
        if v in verdicts:
            return v
    return "PASS"


def verify_binary_claim(max_trees: int = DEFAULT_MAX_TREES, workers: int = 1,
                        flat_limit: int = 200, window: bool = True) -> ClaimReport:
    """Certify: T_4 = T_5 = 0 in a binary algebra forces Gerstenhaber nilindex 6,
    Yagzhev nilindex 4, and the 5-Engel identity.

    Sub-checks, all against the ideal generated by T_4 and T_5:
      gerstenhaber  every 7-leaf one-variable monomial (6 products)
      yagzhev       T_6 and T_7
      engel         Ad_x^5(t)
      gerstenhaber_window  monomials with 7..11 products; together with the
                    6-product check this covers the window [6, 11], and a
                    minimal subtree argument extends vanishing to every
                    monomial with at least 6 products.
    """
    start = time.perf_counter()
    d, J = 2, [4, 5]
    tasks = [(_shape_check, (d, s, J, max_trees, flat_limit, True)) for s in tr.shapes(d, 7)]
    tasks += [(_t_check, (d, 6, J, max_trees, flat_limit)), (_t_check, (d, 7, J, max_trees, flat_limit))]
    tasks.append((verify_engel, (d, 5, J, max_trees, flat_limit, "engel_5")))
    if window:
        for k in range(7, 12):
            tasks += [(_shape_check, (d, s, J, max_trees, flat_limit, False))
                      for s in tr.shapes(d, k + 1)]
    results = _map(tasks, workers)
    n7 = len(tr.shapes(d, 7))
    groups = {
        "gerstenhaber": results[:n7],
        "yagzhev": results[n7:n7 + 2],
        "engel": results[n7 + 2:n7 + 3],
    }
    if window:
        groups["gerstenhaber_window"] = results[n7 + 3:]
    details = {name: {"verdict": _aggregate(r.verdict for r in rs), "checks": len(rs)}
               for name, rs in groups.items()}
    verdict = _aggregate(v["verdict"] for v in details.values())
    return ClaimReport(check="binary_claim", verdict=verdict, subchecks=results, details=details,
                       wall_time=time.perf_counter() - start)
