from __future__ import annotations

import numpy as np
import pytest

from hochschild import (
    AlgebraError,
    abelianizing_filtration,
    associated_graded,
    builtin,
    filtration_checks,
    finite_group,
    group_algebra,
    ideal_span,
    may_filtration,
    verify_dihedral_iso,
)
from hochschild.f2linalg import Subspace
from hochschild.filtrations import Filtration, filtration_by_name


def brute_ideal_dim(a, gens) -> int:
    """Span of all x g y over basis x, y and generators g (independent oracle)."""
    vecs = []
    for g in gens:
        for i in range(a.dim):
            for j in range(a.dim):
                vecs.append(a.multiply(a.multiply(a.basis_vector(i), g), a.basis_vector(j)))
    return Subspace.span(a.dim, np.array(vecs, np.uint8).reshape(-1, a.dim)).dim if vecs else 0


def test_ideal_span_examples(a1):
    assert ideal_span(a1, [a1.element("1")]).dim == 8
    assert ideal_span(a1, []).dim == 0
    q0 = ideal_span(a1, [a1.element("Q0")])
    assert q0.dim == 4 == brute_ideal_dim(a1, [a1.element("Q0")])


def test_may_filtration_of_a1(a1):
    f = may_filtration(a1)
    assert f.dims() == [8, 7, 5, 3, 1, 0]


def test_may_filtration_by_brute_force_powers(a1):
    aug = Subspace.span(8, np.eye(8, dtype=np.uint8)[1:])
    layer = aug
    dims = [8, aug.dim]
    while layer.dim:
        prods = [a1.multiply(x, y) for x in layer.vectors() for y in aug.vectors()]
        layer = Subspace.span(8, np.array(prods, np.uint8))
        dims.append(layer.dim)
    assert dims == may_filtration(a1).dims()


def test_may_filtration_small_cases():
    assert may_filtration(builtin("exterior1")).dims() == [2, 1, 0]
    d8 = group_algebra(finite_group("D8"))
    assert may_filtration(d8).dims() == [8, 7, 5, 3, 1, 0]


def test_abelianizing_filtration(a1):
    f = abelianizing_filtration(a1)
    assert f.dims() == [8, 7, 6, 5, 4, 3, 2, 1, 0]
    assert f.value("Sq1") == 1
    assert f.value("Sq2") == 2
    assert f.value("Q0") == 4
    assert f.layers[4] == ideal_span(a1, [a1.element("Q0")])


def test_filtration_checks(a1):
    ab, may = abelianizing_filtration(a1), may_filtration(a1)
    rep = filtration_checks(ab, may)
    assert rep.multiplicative and rep.hopf and rep.finer_than
    rep = filtration_checks(may)
    assert rep.multiplicative and rep.hopf
    assert rep.finer_than is None


def test_swapped_layers_are_not_multiplicative(a1):
    # Sq2 placed below Sq1: Sq1 Sq2 Sq1 = Sq2 Sq2 lands too low
    vals = np.array([0, 2, 1, 3, 4, 5, 6, 7])
    bad = Filtration.from_values(a1, vals, "swapped")
    assert not filtration_checks(bad).multiplicative


def test_layers_must_nest(a1):
    e = np.eye(8, dtype=np.uint8)
    with pytest.raises(AlgebraError):
        Filtration(a1, (Subspace.full(8), Subspace.span(8, e[[1]]), Subspace.span(8, e[[2]]), Subspace.zero(8)))


def test_associated_graded_abelianizing(a1):
    g = associated_graded(a1, abelianizing_filtration(a1))
    assert g.graded.is_commutative()
    assert g.piece_dims() == {t: 1 for t in range(8)}
    for i in range(1, 8):
        v = g.graded.basis_vector(i)
        assert not g.graded.multiply(v, v).any()


def test_associated_graded_may_is_dihedral(a1):
    g = associated_graded(a1, may_filtration(a1))
    assert not g.graded.is_commutative()
    assert g.piece_dims() == {0: 1, 1: 2, 2: 2, 3: 2, 4: 1}
    assert verify_dihedral_iso(g.graded).ok


def test_associated_graded_of_graded_algebra():
    e = builtin("exterior1")
    g = associated_graded(e, may_filtration(e))
    assert np.array_equal(g.graded.mult, e.mult)


def test_projection_keeps_leading_term(a1):
    g = associated_graded(a1, abelianizing_filtration(a1))
    v = a1.element("Sq1") ^ a1.element("Sq2")
    lead = g.project(v)
    assert lead.sum() == 1
    assert g.values[np.nonzero(lead)[0][0]] == 1


def test_filtration_by_name(a1):
    assert filtration_by_name(a1, "may").dims() == [8, 7, 5, 3, 1, 0]
    with pytest.raises(KeyError):
        filtration_by_name(a1, "weird")
