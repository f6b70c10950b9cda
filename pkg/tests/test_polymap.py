import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from conftest import sample_algebras
from nilalg import algebra as alg
from nilalg import polymap as pm
from nilalg.corpus import cube_algebra, truncated_polynomial
from nilalg.exactmath import MultiPoly, matmul, variables

XV = variables("X", 2)
X1, X2 = (MultiPoly.var(XV, v) for v in XV)
YV = variables("Y", 2)
Y1, Y2 = (MultiPoly.var(YV, v) for v in YV)
TR2, TR3 = truncated_polynomial(2), truncated_polynomial(3)


def random_homogeneous(rng, n, d):
    vs = variables("X", n)
    coords = []
    for _ in range(n):
        terms = {}
        for mono in combinations_with_replacement(range(n), d):
            if rng.random() < 0.5:
                e = [0] * n
                for i in mono:
                    e[i] += 1
                terms[tuple(e)] = rng.randint(-3, 3)
        coords.append(MultiPoly(vs, terms))
    return pm.PolyMap(tuple(coords))


def test_polarize_examples():
    H = pm.PolyMap((MultiPoly.zero(XV), X1 ** 2))
    assert pm.polarize(H) == alg.validate(2, 2, [((1, 1), 2, 1)])
    Z = pm.PolyMap((MultiPoly.zero(XV), MultiPoly.zero(XV)))
    assert pm.polarize(Z, degree=2).is_zero()
    with pytest.raises(ValueError):
        pm.polarize(Z)
    (x,) = (MultiPoly.var(("X1",), "X1"),)
    assert pm.polarize(pm.PolyMap((x ** 3,))) == cube_algebra(3)
    with pytest.raises(ValueError):
        pm.polarize(pm.PolyMap((X1 ** 2 + X2, X1 * X2)))


def test_depolarize_examples():
    assert pm.depolarize(TR2).coords == (0, X1 ** 2)
    assert pm.depolarize(alg.zero_algebra(2, 2)).is_zero()


def test_diagonal_identity_random_maps():
    rng = random.Random(17)
    for _ in range(20):
        n, d = rng.randint(1, 4), rng.randint(2, 3)
        H = random_homogeneous(rng, n, d)
        A = pm.polarize(H, degree=d)
        assert pm.depolarize(A).coords == H.coords


def test_polarize_depolarize_on_tensors():
    for A in sample_algebras():
        if A.is_zero():
            continue
        assert pm.polarize(pm.depolarize(A)).table == A.table


def test_jacobian_examples():
    F = pm.PolyMap((X1, X2 - X1 ** 2))
    assert pm.jacobian(F) == [[1, 0], [-2 * X1, 1]]
    assert pm.jacobian_det(F) == 1
    ident = pm.identity_map(2)
    assert pm.jacobian(ident) == [[1, 0], [0, 1]] and pm.jacobian_det(ident) == 1
    const = pm.PolyMap((MultiPoly.const(XV, 3), MultiPoly.const(XV, -1)))
    assert pm.jacobian(const) == [[0, 0], [0, 0]]
    assert pm.jacobian_det(pm.PolyMap((X2, X1))) == -1


def test_formal_inverse_examples():
    F = pm.PolyMap((X1, X2 - X1 ** 2))
    assert pm.formal_inverse(F, 2).coords == (Y1, Y2 + Y1 ** 2)
    assert pm.formal_inverse(pm.identity_map(2), 3).coords == (Y1, Y2)
    F3 = pm.identity_map(3) - pm.depolarize(TR3)
    G3 = pm.formal_inverse(F3, 3)
    y1, y2, y3 = (MultiPoly.var(G3.vars, v) for v in G3.vars)
    # golden value, confirmed by verify_automorphism
    assert G3.coords == (y1, y2 + y1 ** 2, y3 + 2 * y1 * y2 + 2 * y1 ** 3)
    assert pm.verify_automorphism(F3, G3, 9).status == "EXACT"
    with pytest.raises(ValueError):
        pm.formal_inverse(pm.PolyMap((X1 - X2 ** 2, X2 - X1 ** 3)), 3)
    with pytest.raises(ValueError):
        pm.formal_inverse(pm.PolyMap((2 * X1, X2)), 3)


def test_verify_automorphism_examples():
    F = pm.PolyMap((X1, X2 - X1 ** 2))
    G = pm.formal_inverse(F, 4)
    assert pm.verify_automorphism(F, G, 4).status == "EXACT"
    ident = pm.identity_map(2)
    assert pm.verify_automorphism(ident, pm.identity_map(2, "Y"), 2).status == "EXACT"
    bad = pm.verify_automorphism(F, pm.identity_map(2, "Y"), 2)
    assert bad.status == "FAIL" and bad.residual_fg == ["0", "-Y1^2"]


def test_truncated_verification_pass():
    # cube map is not invertible; its truncated inverse matches only up to the bound
    x = MultiPoly.var(("X1",), "X1")
    F = pm.PolyMap((x - x ** 3,))
    G = pm.formal_inverse(F, 5)
    assert pm.verify_automorphism(F, G, 5).status == "PASS"
    assert pm.verify_automorphism(F, G, 7).status == "FAIL"


def test_jacobian_theorem_examples():
    r = pm.jacobian_theorem_check(TR2)
    assert (r.verdict, r.yagzhev, r.engel, r.bound, r.jacobian_det) == ("PASS", 3, 2, 3, "1")
    r = pm.jacobian_theorem_check(TR3)
    assert (r.verdict, r.yagzhev, r.engel, r.bound, r.jacobian_det) == ("PASS", 4, 3, 5, "1")
    r = pm.jacobian_theorem_check(alg.zero_algebra(2, 2))
    assert (r.verdict, r.yagzhev, r.engel) == ("PASS", 2, 1)
    assert pm.jacobian_theorem_check(cube_algebra(3), p_max=4).verdict == "INCONCLUSIVE"


def nil_maps():
    for A in sample_algebras():
        y = alg.yagzhev_index(A, 6)
        W = alg.yagzhev_window(A.arity, y.index)[1]
        yield A, pm.identity_map(A.dim) - pm.depolarize(A), W


def test_chain_rule():
    for A, F, W in nil_maps():
        G = pm.formal_inverse(F, W)
        assert pm.verify_automorphism(F, G, W).status == "EXACT"
        JF_at_G = [[e.compose(G.coords) for e in row] for row in pm.jacobian(F)]
        prod = matmul(JF_at_G, pm.jacobian(G))
        n = A.dim
        assert prod == [[int(i == j) for j in range(n)] for i in range(n)]
        assert pm.jacobian_det(F) == 1


def test_unipotence():
    for A in sample_algebras():
        e = alg.engel_index(A, 8)
        assert e.found
        d, n = A.arity, e.index
        x, z = alg.generic_elements(A.dim, ("x", "z"))
        M = alg.ad_matrix(A, x)
        vs = x.vars
        ident = [[MultiPoly.const(vs, int(i == j)) for j in range(A.dim)] for i in range(A.dim)]
        dg = [[ident[i][j] - M[i][j].scale(d) for j in range(A.dim)] for i in range(A.dim)]
        # columns of dg are dg_x(e_j)
        for j in range(A.dim):
            col = alg.dg(A, x, alg.basis_element(A.dim, j, vs))
            assert [dg[i][j] for i in range(A.dim)] == list(col.coords)
        power = M
        for _ in range(n - 1):
            power = matmul(power, M)
        assert all(p.is_zero() for row in power for p in row)
        inverse = ident
        Mi = ident
        for i in range(1, n):
            Mi = matmul(Mi, M)
            inverse = [[a + b.scale(d ** i) for a, b in zip(r1, r2)] for r1, r2 in zip(inverse, Mi)]
        assert matmul(dg, inverse) == ident


def test_rename_and_compose():
    F = pm.PolyMap((X1, X2 - X1 ** 2))
    G = pm.rename(F, "Y")
    assert G.vars == YV
    assert pm.compose(F, pm.identity_map(2, "Y")).coords == (Y1, Y2 - Y1 ** 2)
    with pytest.raises(ValueError):
        pm.PolyMap((X1,))
