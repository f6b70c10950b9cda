import random
from fractions import Fraction

import pytest

from conftest import graded_algebras, sample_algebras
from nilalg import algebra as alg
from nilalg import trees as tr
from nilalg.corpus import builtin, cube_algebra, truncated_polynomial
from nilalg.exactmath import MultiPoly, matmul

TR2, TR3, TR4 = (truncated_polynomial(m) for m in (2, 3, 4))


def xy(dim, names=("x", "y")):
    return alg.generic_elements(dim, names)


def P(vs, **coeffs):
    return MultiPoly(vs, coeffs)


def test_validate_examples():
    A = alg.validate(2, 2, [((1, 1), 2, 1)])
    assert A.entry((0, 0), 1) == 1 and A.entry((0, 1), 0) == 0
    with pytest.raises(alg.SymmetryError, match=r"\(1, 2\).*\(2, 1\)"):
        alg.validate(2, 2, [((1, 2), 1, 1), ((2, 1), 1, 2)])
    # permuted inputs with equal values are accepted and normalized
    B = alg.validate(2, 2, [((1, 2), 1, "1/2"), ((2, 1), 1, Fraction(1, 2))])
    assert B.entries() == [((0, 1), 0, Fraction(1, 2))]
    assert alg.validate(3, 4, []).is_zero()
    with pytest.raises(ValueError):
        alg.validate(2, 2, [((1, 3), 1, 1)])


def test_mu_examples():
    (x, y) = xy(2)
    a, b = x.coords[0], x.coords[1]
    got = alg.mu(TR2, [x, x])
    assert got.coords == (0, a * a)
    zero = alg.zero_element(2, x.vars)
    assert alg.mu(TR2, [zero, y]).is_zero()
    assert alg.mu(TR2, [x, y]).coords == alg.mu(TR2, [y, x]).coords


def test_mu_symmetry_random(rng):
    for A in sample_algebras():
        for _ in range(5):
            vs = ("c",)
            args = [alg.constant_element(vs, [Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                                              for _ in range(A.dim)]) for _ in range(A.arity)]
            perm = args[:]
            rng.shuffle(perm)
            assert alg.mu(A, args).coords == alg.mu(A, perm).coords


def test_ad_pow_examples():
    x, y = xy(2)
    a, c = x.coords[0], y.coords[0]
    assert alg.ad_pow(TR2, x, 1, y).coords == (0, a * c)
    assert alg.ad_pow(TR2, x, 2, y).is_zero()
    zero = alg.zero_element(2, x.vars)
    for A in sample_algebras()[:5]:
        xs = alg.generic_elements(A.dim, ("x", "y"))
        z = alg.zero_element(A.dim, xs[0].vars)
        assert alg.ad_pow(A, z, 3, xs[1]).is_zero()


def test_T_examples():
    (x,) = xy(2, ("x",))
    a = x.coords[0]
    assert alg.T(TR2, 1, x).coords == x.coords
    assert alg.T(TR2, 2, x).coords == (0, a * a)
    assert alg.T(TR2, 3, x).is_zero()
    (x,) = xy(3, ("x",))
    a, b = x.coords[0], x.coords[1]
    assert alg.T(TR3, 2, x).coords == (0, a * a, 2 * a * b)
    assert alg.T(TR3, 3, x).coords == (0, 0, 2 * a ** 3)
    assert alg.T(TR3, 4, x).is_zero()


def test_g_gamma_examples():
    x, y = xy(2)
    a, b = x.coords
    c, e = y.coords
    assert alg.g_map(TR2, x).coords == (a, b - a * a)
    Z = alg.zero_algebra(2, 2)
    assert alg.g_map(Z, x).coords == x.coords
    assert alg.g_map(TR2, alg.zero_element(2, x.vars)).is_zero()
    for D in (2, 3, 6):
        assert alg.gamma(TR2, y, D).coords == (c, e + c * c)
    assert alg.gamma(TR2, y, 1).coords == y.coords
    g_of_gamma = alg.g_map(TR2, alg.gamma(TR2, y, 2))
    assert g_of_gamma.coords == y.coords


def test_dg_dgamma_examples():
    x, z = xy(2, ("x", "z"))
    x1, z1, z2 = x.coords[0], z.coords[0], z.coords[1]
    assert alg.dg(TR2, x, z).coords == (z1, z2 - 2 * x1 * z1)
    zero = alg.zero_element(2, x.vars)
    assert alg.dg(TR2, zero, z).coords == z.coords
    assert alg.dg(TR2, x, zero).is_zero()
    y, t = xy(2, ("y", "t"))
    y1, t1, t2 = y.coords[0], t.coords[0], t.coords[1]
    assert alg.dgamma(TR2, y, t, 1).coords == t.coords
    assert alg.dgamma(TR2, y, t, 2).coords == (t1, t2 + 2 * y1 * t1)
    assert alg.dgamma(TR2, alg.g_map(TR2, x), alg.dg(TR2, x, z), 2).coords == z.coords


def test_index_examples():
    Z = alg.zero_algebra(2, 3)
    assert alg.engel_index(TR2, 5).index == 2
    assert alg.engel_index(TR3, 5).index == 3
    assert alg.engel_index(Z, 5).index == 1
    assert alg.yagzhev_index(TR2, 6).index == 3
    assert alg.yagzhev_index(TR3, 6).index == 4
    assert alg.yagzhev_index(Z, 6).index == 2
    assert alg.gerstenhaber_index(TR2, 5).index == 2
    assert alg.gerstenhaber_index(TR3, 5).index == 3
    assert alg.gerstenhaber_index(Z, 5).index == 1


def test_tr4_golden():
    # produced once by the checkers, confirmed by hand (Tr(m) is tQ[t]/t^(m+1))
    got = (alg.engel_index(TR4, 8).index, alg.yagzhev_index(TR4, 8).index,
           alg.gerstenhaber_index(TR4, 8).index)
    assert got == (4, 5, 4)


def test_non_nil_reports_witness():
    A = cube_algebra(3)
    for report in (alg.engel_index(A, 4), alg.yagzhev_index(A, 4), alg.gerstenhaber_index(A, 3)):
        assert not report.found and report.witness


def test_yagzhev_extra_bound():
    r = alg.yagzhev_index(TR3, 6, extra_bound=15)
    assert r.index == 4 and r.details["extra_ok"]


def test_parity_and_degree():
    for A in sample_algebras():
        (x,) = alg.generic_elements(A.dim, ("x",))
        Ts = alg.t_series(A, x, 12)
        for q, Tq in enumerate(Ts, start=1):
            if (q - 1) % (A.arity - 1):
                assert Tq.is_zero()
            for c in Tq.coords:
                assert c.is_zero() or c.homogeneous_degree() == q


def test_ad_pow_bidegree():
    for A in sample_algebras():
        x, y = alg.generic_elements(A.dim, ("x", "y"))
        xvars = {v for v in x.vars if v.startswith("x")}
        for k in (1, 2):
            for c in alg.ad_pow(A, x, k, y).coords:
                for exps in c.terms:
                    dx = sum(e for v, e in zip(c.vars, exps) if v in xvars)
                    assert (dx, sum(exps) - dx) == (k * (A.arity - 1), 1)


def yagzhev_nil_algebras():
    out = []
    for A in sample_algebras():
        r = alg.yagzhev_index(A, 6)
        assert r.found
        out.append((A, r.index))
    return out


def test_inverse_pair_and_linearized_inverse():
    for A, p in yagzhev_nil_algebras():
        W = alg.yagzhev_window(A.arity, p)[1]
        x, y, z = alg.generic_elements(A.dim, ("x", "y", "z"))
        assert alg.g_map(A, alg.gamma(A, y, W)).coords == y.coords
        assert alg.gamma(A, alg.g_map(A, x), W).coords == x.coords
        assert alg.dgamma(A, alg.g_map(A, x), alg.dg(A, x, z), W).coords == z.coords


def test_theorem_bound_and_degree_inequality():
    for A, p in yagzhev_nil_algebras():
        d = A.arity
        bound = alg.theorem_bound(d, p)
        e = alg.engel_index(A, bound)
        assert e.found and e.index <= bound
        N = (p - 2) // (d - 1)
        assert (d - 1) * (e.index - 1) + 1 <= d * (d - 1) * N + 1


def test_gerstenhaber_implies_t_vanishing():
    # T_q is a combination of one-variable monomials with q-1/(d-1) products
    for A in sample_algebras():
        g = alg.gerstenhaber_index(A, 6)
        if not g.found:
            continue
        (x,) = alg.generic_elements(A.dim, ("x",))
        d = A.arity
        q0 = g.index * (d - 1) + 1
        for q, Tq in enumerate(alg.t_series(A, x, q0 + 2 * (d - 1)), start=1):
            if q >= q0:
                assert Tq.is_zero()


def test_evaluation_consistency():
    rng = random.Random(99)
    for A in sample_algebras() + [cube_algebra(3)]:
        (x,) = alg.generic_elements(A.dim, ("x",))
        points = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(A.dim)] for _ in range(25)]
        Ts = alg.t_series(A, x, 7)
        for Tq in Ts:
            numeric_zero = all(not any(Tq.evaluate(pt)) for pt in points)
            assert numeric_zero == Tq.is_zero()
        M = alg.ad_matrix(A, x)
        Pk = M
        for _ in range(3):
            symbolic_zero = all(e.is_zero() for row in Pk for e in row)
            numeric_zero = all(all(not e.evaluate(pt) for row in Pk for e in row) for pt in points)
            assert symbolic_zero == numeric_zero
            Pk = matmul(Pk, M)


def test_gerstenhaber_shapes_evaluate_consistently():
    rng = random.Random(3)
    for A in [TR3, TR4] + graded_algebras(3):
        (x,) = alg.generic_elements(A.dim, ("x",))
        for shape in tr.shapes(A.arity, 5 if A.arity == 2 else 7):
            value = alg.evaluate_tree(A, shape, {0: x})
            pts = [[Fraction(rng.randint(-5, 5)) for _ in range(A.dim)] for _ in range(25)]
            assert value.is_zero() == all(not any(value.evaluate(p)) for p in pts)


def test_builtins():
    assert builtin("tr3") == TR3
    with pytest.raises(KeyError):
        builtin("missing")
