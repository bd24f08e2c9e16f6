from __future__ import annotations

import itertools

import numpy as np
import pytest

from hochschild import (
    AlgebraError,
    builtin,
    conjugacy_data,
    dualize,
    finite_group,
    group_algebra,
    make_algebra,
    verify_dihedral_iso,
)
from hochschild.algebras import BUILTIN_NAMES, GROUP_NAMES


def exterior_tensors():
    mult = np.zeros((2, 2, 2), np.uint8)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    comult = np.zeros((2, 2, 2), np.uint8)
    comult[0, 0, 0] = 1
    comult[1, 1, 0] = comult[1, 0, 1] = 1
    return mult, comult


def test_exterior_from_structure_constants():
    mult, comult = exterior_tensors()
    a = make_algebra(["1", "x"], [0, 1], mult, comult)
    assert a.dim == 2
    assert a.fingerprint == builtin("exterior1").fingerprint


def test_flipped_structure_constant_is_a_grading_error():
    mult, comult = exterior_tensors()
    mult[1, 1, 1] = 1
    with pytest.raises(AlgebraError) as err:
        make_algebra(["1", "x"], [0, 1], mult, comult)
    assert err.value.kind == "grading"
    assert err.value.triple == (1, 1, 1)


def _dual_steenrod_constants():
    """F2[xi1, xi2]/(xi1^4, xi2^2) by explicit polynomial arithmetic."""
    monos = [(i, j) for j in range(2) for i in range(4)]
    idx = {m: k for k, m in enumerate(monos)}
    n = len(monos)
    mult = np.zeros((n, n, n), np.uint8)
    for x, y in itertools.product(monos, repeat=2):
        z = (x[0] + y[0], x[1] + y[1])
        if z in idx:
            mult[idx[x], idx[y], idx[z]] = 1
    # coproducts as {(left mono, right mono): coeff}
    gen = {
        (1, 0): {((1, 0), (0, 0)): 1, ((0, 0), (1, 0)): 1},
        (0, 1): {((0, 1), (0, 0)): 1, ((1, 0), (2, 0)): 1, ((0, 0), (0, 1)): 1},
    }

    def times(p, q):
        out = {}
        for (a, b), c in p.items():
            for (e, f), d in q.items():
                l = (a[0] + e[0], a[1] + e[1])
                r = (b[0] + f[0], b[1] + f[1])
                if l in idx and r in idx:
                    out[(l, r)] = out.get((l, r), 0) ^ (c & d)
        return {k: v for k, v in out.items() if v}

    comult = np.zeros((n, n, n), np.uint8)
    for m in monos:
        d = {((0, 0), (0, 0)): 1}
        for _ in range(m[0]):
            d = times(d, gen[(1, 0)])
        for _ in range(m[1]):
            d = times(d, gen[(0, 1)])
        for (l, r) in d:
            comult[idx[m], idx[l], idx[r]] = 1
    degrees = [i + 3 * j for i, j in monos]
    return mult, comult, degrees


def test_dual_steenrod_presentation():
    mult, comult, degrees = _dual_steenrod_constants()
    names = builtin("a1_dual").names
    c = make_algebra(names, degrees, mult, comult)
    assert c.dim == 8
    b = builtin("a1_dual")
    assert np.array_equal(c.mult, b.mult)
    assert np.array_equal(c.comult, b.comult)


def test_dualize_a1_dual_degree_dims():
    a = dualize(builtin("a1_dual"))
    assert a.poincare_polynomial() == {0: 1, 1: 1, 2: 1, 3: 2, 4: 1, 5: 1, 6: 1}


def test_a1_adem_relations():
    a = builtin("a1")
    sq1, sq2 = a.element("Sq1"), a.element("Sq2")
    m = a.multiply
    assert not m(sq1, sq1).any()
    # Sq2 Sq2 = Sq3 Sq1 = Sq1 Sq2 Sq1
    assert np.array_equal(m(sq2, sq2), m(m(sq1, sq2), sq1))
    assert np.array_equal(m(sq1, sq2) ^ m(sq2, sq1), a.element("Q0"))
    top = m(m(sq1, sq2), m(sq1, sq2))
    assert top.any() and np.array_equal(top, m(m(sq2, sq1), m(sq2, sq1)))
    assert not a.is_commutative()
    assert a.dim == 8


@pytest.mark.parametrize("name", ["exterior1", "a1", "truncpoly2", "e0may_dual"])
def test_dualize_is_an_involution(name):
    a = builtin(name)
    b = dualize(dualize(a))
    assert b.names == a.names
    assert b.fingerprint == a.fingerprint


def test_dual_of_abelianized_dual_is_exterior_on_three_generators():
    e = dualize(builtin("e0ab_dual"))
    assert e.dim == 8 and e.is_commutative()
    for i in range(1, 8):
        v = e.basis_vector(i)
        assert not e.multiply(v, v).any()
    gens = [e.element(x) for x in ("xi10*", "xi10^2*", "xi20*")]
    top = e.multiply(e.multiply(gens[0], gens[1]), gens[2])
    assert top.any()


def test_builtin_e0may_dual_coproduct():
    c = builtin("e0may_dual")
    i = c.index("xi20")
    terms = {(c.names[p], c.names[q]) for p, q in np.argwhere(c.comult[i])}
    assert terms == {("xi20", "1"), ("xi10", "xi11"), ("1", "xi20")}
    for x in ("xi10", "xi11", "xi20"):
        v = c.element(x)
        assert not c.multiply(v, v).any()


def test_builtin_truncpoly2():
    t = builtin("truncpoly2")
    assert t.dim == 4
    terms = {(t.names[p], t.names[q]) for p, q in np.argwhere(t.comult[t.index("y")])}
    assert terms == {("y", "1"), ("x", "x"), ("1", "y")}


def test_all_builtins_construct():
    for name in BUILTIN_NAMES:
        assert builtin(name).dim in (2, 4, 8)
    with pytest.raises(KeyError):
        builtin("nope")


@pytest.mark.parametrize(
    "broken, kind",
    [
        ("nonassoc", "associativity"),
        ("nounit", "unit"),
        ("shape", "shape"),
        ("dupe", "shape"),
    ],
)
def test_make_algebra_rejects_broken_input(broken, kind):
    mult, comult = exterior_tensors()
    names = ["1", "x"]
    if broken == "nonassoc":
        # a a = b and b a = a, other products 0: (a a) a = a but a (a a) = 0
        names = ["1", "a", "b"]
        mult = np.zeros((3, 3, 3), np.uint8)
        for i in range(3):
            mult[0, i, i] = mult[i, 0, i] = 1
        mult[1, 1, 2] = 1
        mult[2, 1, 1] = 1
        with pytest.raises(AlgebraError) as err:
            make_algebra(names, [0, 0, 0], mult)
    elif broken == "nounit":
        with pytest.raises(AlgebraError) as err:
            make_algebra(names, [0, 1], np.zeros((2, 2, 2), np.uint8))
    elif broken == "shape":
        with pytest.raises(AlgebraError) as err:
            make_algebra(names, [0, 1], mult[:1])
    else:
        with pytest.raises(AlgebraError) as err:
            make_algebra(["x", "x"], [0, 1], mult)
    assert err.value.kind == kind


def test_hopf_compatibility_is_checked():
    mult, comult = exterior_tensors()
    comult[1] = 0
    comult[1, 1, 1] = 1  # x grouplike: degrees break first
    with pytest.raises(AlgebraError):
        make_algebra(["1", "x"], [0, 0], mult, comult)


def test_group_algebras():
    c2 = group_algebra(finite_group("C2"))
    assert c2.dim == 2 and c2.is_commutative()
    d8 = group_algebra(finite_group("D8"))
    assert d8.dim == 8 and not d8.is_commutative()
    assert group_algebra(finite_group("C4")).dim == 4


def _centralizer_order(g, x):
    return sum(1 for h in range(g.order) if g.mul(h, x) == g.mul(x, h))


def test_dihedral_conjugacy_classes():
    g = finite_group("D8")
    classes = conjugacy_data(g)
    assert len(classes) == 5
    assert sum(len(c.elements) for c in classes) == 8
    # class equation: |C(x)| = |G| / |class of x|
    orders = [len(c.centralizer_elements) for c in classes]
    assert orders == [8 // len(c.elements) for c in classes]
    assert orders == [_centralizer_order(g, c.elements[0]) for c in classes]
    assert orders == [8, 4, 4, 4, 8]
    # centralizer types: D8 twice, C4 for the quarter turns, C2 x C2 for reflections
    kinds = []
    for c in classes:
        h = c.centralizer
        if not h.is_abelian():
            kinds.append("D8")
        elif any(_element_order(h, x) == 4 for x in range(h.order)):
            kinds.append("C4")
        else:
            kinds.append("C2xC2")
    assert sorted(kinds) == ["C2xC2", "C2xC2", "C4", "D8", "D8"]


def _element_order(g, x):
    k, y = 1, x
    while y != g.identity:
        y = g.mul(y, x)
        k += 1
    return k


@pytest.mark.parametrize("name", ["trivial", "C2", "C4", "C2xC2"])
def test_abelian_groups_have_singleton_classes(name):
    g = finite_group(name)
    classes = conjugacy_data(g)
    assert len(classes) == g.order
    assert all(len(c.centralizer_elements) == g.order for c in classes)


def test_group_validation():
    bad = np.array([[0, 1], [1, 1]])
    with pytest.raises(AlgebraError):
        from hochschild import FiniteGroup

        FiniteGroup(bad)
    assert set(GROUP_NAMES) == {"trivial", "C2", "C4", "C2xC2", "D8"}


def test_dihedral_isomorphism():
    rep = verify_dihedral_iso()
    assert rep.ok and rep.bijective and rep.homomorphism and rep.identity_ok


def test_dihedral_map_into_a1_fails():
    rep = verify_dihedral_iso(target=builtin("a1"))
    assert not rep.ok
    assert rep.identity_ok
    assert not rep.homomorphism


def test_permuted_basis_keeps_structure():
    a = builtin("truncpoly2")
    b = a.permuted([0, 2, 1, 3])
    x, y = b.element("x"), b.element("y")
    assert np.array_equal(b.multiply(x, y), b.element("x.y"))
