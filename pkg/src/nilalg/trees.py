"""Leaf-labeled d-ary trees with unordered children.

A tree is either a leaf, stored as a plain ``int`` label, or an internal node,
stored as a tuple of its children sorted by :func:`tree_key`. Sorting makes
structurally equal trees compare and hash equal, so tuples double as canonical
forms. Leaf labels may repeat: a tree whose labels are colors rather than
distinct names represents an orbit of labeled trees under the permutations
that preserve colors.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

Tree = Union[int, tuple]
Multiset = tuple[int, ...]  # sorted tuple of leaf labels/colors


@lru_cache(maxsize=None)
def tree_key(t: Tree):
    """Total order on canonical trees: leaves before nodes, then lexicographic."""
    if isinstance(t, int):
        return (0, t)
    return (1, tuple(tree_key(c) for c in t))


def node(*children: Tree) -> tuple:
    return tuple(sorted(children, key=tree_key))


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


@lru_cache(maxsize=None)
def leaves(t: Tree) -> Multiset:
    if isinstance(t, int):
        return (t,)
    return tuple(sorted(x for c in t for x in leaves(c)))


def degree(t: Tree) -> int:
    return len(leaves(t))


@lru_cache(maxsize=None)
def internal_count(t: Tree) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(internal_count(c) for c in t)


def canonical(t) -> Tree:
    """Canonical form of a nested list/tuple structure with int leaves."""
    if isinstance(t, int):
        return t
    return node(*(canonical(c) for c in t))


def relabel(t: Tree, mapping: Mapping[int, int]) -> Tree:
    if isinstance(t, int):
        return mapping[t]
    return node(*(relabel(c, mapping) for c in t))


def subtrees(t: Tree) -> Iterable[Tree]:
    yield t
    if not isinstance(t, int):
        for c in t:
            yield from subtrees(c)


def arity_of(t: Tree) -> int | None:
    if isinstance(t, int):
        return None
    return len(t)


@lru_cache(maxsize=None)
def automorphism_count(t: Tree) -> int:
    """Number of color-preserving automorphisms (permutations of equal siblings)."""
    if isinstance(t, int):
        return 1
    total = 1
    for c in t:
        total *= automorphism_count(c)
    for mult in Counter(t).values():
        total *= math.factorial(mult)
    return total


def orbit_size(colored: Tree) -> int:
    """Number of labeled trees whose coloring is ``colored``.

    Labels of one color are interchangeable; the count is the size of the
    orbit of any such labeled tree under color-preserving relabelings.
    """
    group = 1
    for mult in Counter(leaves(colored)).values():
        group *= math.factorial(mult)
    return group // automorphism_count(colored)


# -- enumeration ------------------------------------------------------------


def _valid_size(d: int, k: int) -> bool:
    return k >= 1 and (k - 1) % (d - 1) == 0


@lru_cache(maxsize=None)
def sub_multisets(M: Multiset) -> tuple[Multiset, ...]:
    """All sub-multisets of M (including empty and M itself) as sorted tuples."""
    counts = sorted(Counter(M).items())
    out = []
    for picks in product(*(range(m + 1) for _, m in counts)):
        out.append(tuple(x for (x, _), k in zip(counts, picks) for _ in range(k)))
    return tuple(out)


def multiset_difference(M: Multiset, N: Multiset) -> Multiset:
    rest = Counter(M)
    rest.subtract(N)
    if any(v < 0 for v in rest.values()):
        raise ValueError(f"{N} is not a sub-multiset of {M}")
    return tuple(sorted(rest.elements()))


@lru_cache(maxsize=None)
def colored_trees(d: int, M: Multiset) -> tuple[Tree, ...]:
    """All canonical d-ary trees whose leaf multiset is exactly M, sorted by key."""
    M = tuple(sorted(M))
    if not M or not _valid_size(d, len(M)):
        return ()
    if len(M) == 1:
        return (M[0],)
    return tuple(sorted((tuple(f) for f in forests(d, M, d)), key=tree_key))


@lru_cache(maxsize=None)
def forests(d: int, M: Multiset, k: int) -> tuple[tuple[Tree, ...], ...]:
    """All multisets of k canonical trees whose leaves jointly make up M.

    Each forest is returned once, as a tuple sorted by :func:`tree_key`.
    """
    M = tuple(sorted(M))
    if k < 1 or len(M) < k:
        return ()
    if k == 1:
        return tuple((t,) for t in colored_trees(d, M))
    out = []
    for first in sub_multisets(M):
        if not first or len(M) - len(first) < k - 1 or not _valid_size(d, len(first)):
            continue
        rest = multiset_difference(M, first)
        tails = forests(d, rest, k - 1)
        if not tails:
            continue
        for t in colored_trees(d, first):
            kt = tree_key(t)
            for tail in tails:
                if kt <= tree_key(tail[0]):
                    out.append((t,) + tail)
    out.sort(key=lambda f: tuple(tree_key(t) for t in f))
    return tuple(out)


def enumerate_trees(d: int, labels: Iterable[int]) -> list[Tree]:
    """Canonical d-ary trees with leaves bijectively labeled by ``labels``."""
    labels = tuple(sorted(labels))
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct")
    if d < 2:
        raise ValueError("arity must be at least 2")
    return list(colored_trees(d, labels))


def shapes(d: int, n_leaves: int, color: int = 0) -> list[Tree]:
    """Unlabeled d-ary tree shapes (all leaves carry one color)."""
    return list(colored_trees(d, (color,) * n_leaves))


def leaves_for_internal(d: int, k: int) -> int:
    return k * (d - 1) + 1


# -- counting ---------------------------------------------------------------


@lru_cache(maxsize=None)
def count_labeled_trees(d: int, q: int) -> int:
    """Number of d-ary unordered trees with q distinct leaf labels.

    Counts ordered splits of the label set into d nonempty blocks by root
    block sizes (multinomial coefficients), then divides by d! because the
    children are unordered and the blocks are distinct.
    """
    if q == 1:
        return 1
    if not _valid_size(d, q):
        return 0
    total = 0
    for sizes in _compositions(q, d):
        if not all(_valid_size(d, s) for s in sizes):
            continue
        ways = math.factorial(q)
        for s in sizes:
            ways //= math.factorial(s)
        term = ways
        for s in sizes:
            term *= count_labeled_trees(d, s)
        total += term
    return total // math.factorial(d)


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _compositions(q: int, parts: int):
    if parts == 1:
        if q >= 1:
            yield (q,)
        return
    for first in range(1, q - parts + 2):
        for rest in _compositions(q - first, parts - 1):
            yield (first,) + rest


def compositions(q: int, parts: int) -> list[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to q."""
    return list(_compositions(q, parts))


# -- text form ---------------------------------------------------------------


def to_string(t: Tree) -> str:
    if isinstance(t, int):
        return str(t)
    return "(" + " ".join(to_string(c) for c in t) + ")"


_TOKEN = re.compile(r"\s*(\(|\)|-?\d+)")


def parse_tree(text: str) -> Tree:
    """Inverse of :func:`to_string`; returns the canonical tree."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad tree syntax at offset {pos}: {text!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()

    def walk(i: int):
        if i >= len(tokens):
            raise ValueError(f"unbalanced parentheses in {text!r}")
        tok = tokens[i]
        if tok == "(":
            kids = []
            i += 1
            while i < len(tokens) and tokens[i] != ")":
                kid, i = walk(i)
                kids.append(kid)
            if i == len(tokens):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return node(*kids), i + 1
        if tok == ")":
            raise ValueError(f"unexpected ')' in {text!r}")
        return int(tok), i + 1

    t, end = walk(0)
    if end != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return t


def minimal_window_subtree(t: Tree, lo: int, hi: int) -> Tree | None:
    """Some subtree whose internal-node count lies in [lo, hi], or None."""
    for s in subtrees(t):
        if lo <= internal_count(s) <= hi:
            return s
    return None


def right_comb(d: int, x_labels: Sequence[int], last: int) -> Tree:
    """mu(x, ..., x, mu(x, ..., x, ... mu(x, ..., x, last))) with x slots filled in order."""
    if len(x_labels) % (d - 1):
        raise ValueError("number of x labels must be a multiple of d-1")
    t: Tree = last
    chunks = [x_labels[i:i + d - 1] for i in range(0, len(x_labels), d - 1)]
    for chunk in reversed(chunks):
        t = node(*chunk, t)
    return t
