"""Ideal filtrations of algebras, adapted bases and associated graded algebras.

Filtrations are decreasing: layer 0 is the whole algebra, the last layer is 0.
Each filtration carries an adapted basis, homogeneous for the topological
degree, in which every layer is spanned by the basis vectors of value at
least its index.  Chain-level filtration values are then plain sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebras import AlgebraError, StructuredBialgebra, make_algebra
from .f2linalg import BitMatrix, Subspace, kernel_basis, solve

__all__ = [
    "Filtration",
    "ideal_span",
    "may_filtration",
    "abelianizing_filtration",
    "filtration_by_name",
    "GradedAlgebraWithProjection",
    "associated_graded",
    "FiltrationReport",
    "filtration_checks",
    "joint_adapted_basis",
]


def ideal_span(a: StructuredBialgebra, gens) -> Subspace:
    """Two-sided ideal generated by ``gens``, by saturation under basis products."""
    if not a.has_algebra:
        raise AlgebraError("structure", "ideal_span needs a multiplication")
    n = a.dim
    gens = np.asarray(gens, dtype=np.uint8).reshape(-1, n)
    span = Subspace.span(n, gens)
    m = a.mult.astype(np.int64)
    for _ in range(n + 1):
        v = span.vectors().astype(np.int64)
        if len(v) == 0:
            return span
        left = np.einsum("ia,bac->ibc", v, m).reshape(-1, n) & 1  # e_b * v_i
        right = np.einsum("ia,abc->ibc", v, m).reshape(-1, n) & 1  # v_i * e_b
        new = Subspace.span(n, np.vstack([v, left, right]))
        if new.dim == span.dim:
            return span
        span = new
    raise AssertionError("ideal saturation did not stabilize")


def _homogeneous_part(a: StructuredBialgebra, s: Subspace, d: int) -> Subspace:
    mask = np.asarray(a.degrees) == d
    v = s.vectors().copy()
    v[:, ~mask] = 0
    return Subspace.span(a.dim, v)


def _complement(space: Subspace, sub: Subspace, preferred: np.ndarray) -> list[np.ndarray]:
    """Vectors completing a basis of ``sub`` to one of ``space``.

    Candidates are the ``preferred`` vectors lying in ``space`` first, then the
    echelon basis of ``space``; this keeps canonical basis vectors whenever
    they are adapted.
    """
    chosen: list[np.ndarray] = []
    acc = sub
    for cand in list(preferred) + list(space.vectors()):
        if acc.dim == space.dim:
            break
        if space.contains(cand) and not acc.contains(cand):
            chosen.append(np.asarray(cand, np.uint8))
            acc = acc + Subspace.span(space.ambient_dim, cand[None, :])
    assert acc.dim == space.dim
    return chosen


def joint_adapted_basis(a: StructuredBialgebra, layer_lists: list[list[Subspace]]) -> tuple[np.ndarray, np.ndarray]:
    """Degree-homogeneous basis adapted to one or two filtrations at once.

    Returns (rows, values) where rows[i] is a basis vector and values[i, k] its
    value under filtration k.  For two filtrations the complement of
    F^{t+1} cap G^m + F^t cap G^{m+1} inside F^t cap G^m is chosen for every
    (t, m); two chains of subspaces always generate a distributive lattice,
    so this is a basis.
    """
    n = a.dim
    eye = np.eye(n, dtype=np.uint8)
    k = len(layer_lists)
    if k not in (1, 2):
        raise ValueError("one or two filtrations")
    rows, vals = [], []
    for d in sorted(set(int(x) for x in a.degrees)):
        pref = eye[np.asarray(a.degrees) == d]
        lay = [[_homogeneous_part(a, L, d) for L in layers] + [Subspace.zero(n)] for layers in layer_lists]
        if k == 1:
            L = lay[0]
            for t in range(len(L) - 2, -1, -1):
                for v in _complement(L[t], L[t + 1], pref):
                    rows.append(v)
                    vals.append((t,))
        else:
            F, G = lay
            for t in range(len(F) - 2, -1, -1):
                for m in range(len(G) - 2, -1, -1):
                    top = F[t].intersection(G[m])
                    sub = F[t + 1].intersection(G[m]) + F[t].intersection(G[m + 1])
                    for v in _complement(top, sub, pref):
                        rows.append(v)
                        vals.append((t, m))
    rows = np.array(rows, dtype=np.uint8).reshape(-1, n)
    vals = np.array(vals, dtype=np.int64).reshape(-1, k)
    if rows.shape[0] != n or Subspace.span(n, rows).dim != n:
        raise AlgebraError("filtration", "filtrations admit no common adapted basis (layers not graded?)")
    # canonical order: keep canonical basis order where rows are unit vectors
    order = np.lexsort([np.argmax(rows, axis=1)])
    rows, vals = rows[order], vals[order]
    for j, layers in enumerate(layer_lists):
        for t, L in enumerate(layers):
            if Subspace.span(n, rows[vals[:, j] >= t]) != L:
                raise AlgebraError("filtration", f"layer {t} is not spanned by adapted basis vectors")
    return rows, vals


@dataclass(frozen=True, eq=False)
class Filtration:
    algebra: StructuredBialgebra
    layers: tuple[Subspace, ...]
    name: str = "filtration"

    def __post_init__(self):
        n = self.algebra.dim
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers or layers[0].dim != n:
            raise AlgebraError("filtration", "layer 0 must be the whole algebra")
        if layers[-1].dim != 0:
            raise AlgebraError("filtration", "the last layer must be 0")
        for i in range(len(layers) - 1):
            if not layers[i + 1].issubset(layers[i]):
                raise AlgebraError("filtration", f"layer {i + 1} is not contained in layer {i}", (i + 1,))

    @classmethod
    def from_values(cls, a: StructuredBialgebra, values, name: str = "filtration") -> "Filtration":
        """Layer t = span of basis vectors with value >= t."""
        values = np.asarray(values, np.int64)
        top = int(values.max()) + 1 if len(values) else 1
        eye = np.eye(a.dim, dtype=np.uint8)
        return cls(a, tuple(Subspace.span(a.dim, eye[values >= t]) for t in range(top + 1)), name)

    @property
    def length(self) -> int:
        return len(self.layers)

    def dims(self) -> list[int]:
        return [L.dim for L in self.layers]

    def value(self, v) -> int:
        """Largest t with v in layer t (v a vector or a basis name or index)."""
        if isinstance(v, str):
            v = self.algebra.element(v)
        elif isinstance(v, (int, np.integer)):
            v = self.algebra.basis_vector(int(v))
        v = np.asarray(v, np.uint8)
        if not v.any():
            raise ValueError("the zero vector has infinite filtration value")
        t = 0
        while t + 1 < self.length and self.layers[t + 1].contains(v):
            t += 1
        return t

    @cached_property
    def _adapted(self) -> tuple[np.ndarray, np.ndarray]:
        rows, vals = joint_adapted_basis(self.algebra, [list(self.layers)])
        return rows, vals[:, 0]

    @property
    def basis_change(self) -> np.ndarray:
        """Rows = adapted basis vectors in canonical coordinates."""
        return self._adapted[0]

    @property
    def values(self) -> np.ndarray:
        """Filtration value of each adapted basis vector."""
        return self._adapted[1]

    def canonical_is_adapted(self) -> bool:
        return bool(np.array_equal(self.basis_change, np.eye(self.algebra.dim, dtype=np.uint8)))

    @cached_property
    def adapted_algebra(self) -> StructuredBialgebra:
        if self.canonical_is_adapted():
            return self.algebra
        return self.algebra.change_basis(self.basis_change)

    def __repr__(self) -> str:
        return f"Filtration({self.name}, dims={self.dims()})"


def may_filtration(a: StructuredBialgebra) -> Filtration:
    """Powers of the augmentation ideal (kernel of the counit)."""
    if a.counit is None or not a.has_algebra:
        raise AlgebraError("filtration", "the May filtration needs a counit and a multiplication")
    n = a.dim
    eps = np.asarray(a.counit, np.int64)
    aug = kernel_basis(BitMatrix.from_dense(eps[None, :]))
    layers = [Subspace.full(n), aug]
    m = a.mult.astype(np.int64)
    while layers[-1].dim:
        prev = layers[-1].vectors().astype(np.int64)
        gens = aug.vectors().astype(np.int64)
        prods = np.einsum("ia,jb,abc->ijc", prev, gens, m).reshape(-1, n) & 1
        nxt = Subspace.span(n, prods) if len(prods) else Subspace.zero(n)
        if nxt.dim == layers[-1].dim:
            raise AlgebraError("filtration", "augmentation ideal is not nilpotent")
        layers.append(nxt)
    return Filtration(a, tuple(layers), "may")


# Generator lists of the abelianizing filtration of A(1), as words in
# Sq1, Sq2 and Q0 (a word is a product of named elements).
_AB_GENERATORS = (
    (("Sq1",), ("Sq2",)),
    (("Sq2",),),
    (("Sq1", "Sq2"), ("Sq2", "Sq1")),
    (("Q0",),),
    (("Sq1", "Q0"), ("Sq2", "Q0")),
    (("Sq2", "Q0"),),
    (("Sq1", "Sq2", "Q0"),),
)


def abelianizing_filtration(a1: StructuredBialgebra) -> Filtration:
    """The nine-layer filtration of A(1) with one-dimensional graded pieces."""
    n = a1.dim

    def word(w):
        v = a1.unit.astype(np.uint8)
        for name in w:
            v = a1.multiply(v, a1.element(name))
        return v

    layers = [Subspace.full(n)]
    for gens in _AB_GENERATORS:
        layers.append(ideal_span(a1, np.array([word(w) for w in gens])))
    layers.append(Subspace.zero(n))
    return Filtration(a1, tuple(layers), "ab")


def filtration_by_name(a: StructuredBialgebra, name: str) -> Filtration:
    if name == "may":
        return may_filtration(a)
    if name in ("abelianizing", "ab"):
        return abelianizing_filtration(a)
    raise KeyError(f"unknown filtration {name!r}; choose may or abelianizing")


@dataclass(frozen=True)
class FiltrationReport:
    multiplicative: bool
    hopf: bool | None
    finer_than: bool | None
    first_failure: str | None = None


def _value_checks(a: StructuredBialgebra, vals: np.ndarray) -> tuple[bool, bool | None, str | None]:
    """Multiplicativity and Hopf property in a basis with the given values."""
    failure = None
    mult_ok = True
    if a.has_algebra:
        nz = np.argwhere(a.mult)
        bad = nz[vals[nz[:, 2]] < vals[nz[:, 0]] + vals[nz[:, 1]]]
        if len(bad):
            x, y, z = bad[0]
            mult_ok = False
            failure = f"{a.names[x]} * {a.names[y]} has a {a.names[z]} term of lower filtration"
    hopf = None
    if a.has_coalgebra:
        nz = np.argwhere(a.comult)
        bad = nz[vals[nz[:, 1]] + vals[nz[:, 2]] < vals[nz[:, 0]]]
        hopf = not len(bad)
        if len(bad) and failure is None:
            z, x, y = bad[0]
            failure = f"coproduct of {a.names[z]} has {a.names[x]} (x) {a.names[y]} of lower filtration"
    return mult_ok, hopf, failure


def filtration_checks(f: Filtration, other: Filtration | None = None) -> FiltrationReport:
    """Multiplicative, Hopf and (if ``other`` given) finer-than-other checks.

    ``f`` is finer than ``other`` when every layer of ``other`` lies in the
    layer of ``f`` with the same index.

    Values are read in the adapted basis, where checking basis products and
    basis coproducts covers all layer pairs.
    """
    b = f.adapted_algebra
    mult_ok, hopf, failure = _value_checks(b, f.values)
    finer = None
    if other is not None:
        zero = Subspace.zero(f.algebra.dim)
        finer = all(L.issubset(f.layers[t] if t < f.length else zero) for t, L in enumerate(other.layers))
    return FiltrationReport(mult_ok, hopf, finer, failure)


@dataclass(frozen=True, eq=False)
class GradedAlgebraWithProjection:
    """Associated graded algebra together with the leading-term projection."""

    graded: StructuredBialgebra
    filtration: Filtration
    basis_change: np.ndarray
    values: np.ndarray
    joint_values: np.ndarray | None = None

    def project(self, v) -> np.ndarray:
        """Leading term of a nonzero vector, in graded-basis coordinates."""
        v = np.asarray(v, np.uint8)
        coords = solve(BitMatrix.from_dense(self.basis_change.T), v)
        if coords is None or not coords.any():
            return np.zeros(len(v), np.uint8)
        lead = self.values[coords.astype(bool)].min()
        out = coords.copy()
        out[self.values != lead] = 0
        return out

    def piece_dims(self) -> dict[int, int]:
        vals, counts = np.unique(self.values, return_counts=True)
        return {int(t): int(c) for t, c in zip(vals, counts)}

    def induced(self, other: Filtration, name: str | None = None) -> Filtration:
        """The filtration that ``other`` induces on the associated graded.

        Requires construction with ``compatible_with=other`` so that the graded
        basis is adapted to both filtrations.
        """
        if self.joint_values is None:
            raise AlgebraError("filtration", "build with compatible_with=<filtration> to induce a filtration")
        return Filtration.from_values(self.graded, self.joint_values, name or other.name)


def associated_graded(
    a: StructuredBialgebra,
    f: Filtration,
    compatible_with: Filtration | None = None,
    weight_name: str | None = None,
) -> GradedAlgebraWithProjection:
    """E_0 of a multiplicative filtration, graded by filtration value.

    The product (coproduct, if the filtration is Hopf) keeps exactly the terms
    whose value is the sum of the input values.  The filtration value becomes
    the weight ``weight_name`` (default: the filtration's name).
    """
    if f.algebra is not a and f.algebra.fingerprint != a.fingerprint:
        raise AlgebraError("filtration", "filtration belongs to a different algebra")
    if compatible_with is None:
        rows, vals = f.basis_change, f.values
        joint = None
    else:
        rows, both = joint_adapted_basis(a, [list(f.layers), list(compatible_with.layers)])
        vals, joint = both[:, 0], both[:, 1]
    if np.array_equal(rows, np.eye(a.dim, dtype=np.uint8)):
        b = a
    else:
        b = a.change_basis(rows)
    mult_ok, hopf, failure = _value_checks(b, vals)
    if not mult_ok:
        raise AlgebraError("filtration", f"filtration is not multiplicative: {failure}")
    mult = None
    unit = None
    if b.has_algebra:
        mult = b.mult * (vals[None, None, :] == vals[:, None, None] + vals[None, :, None])
        unit = b.unit
    comult = counit = None
    if b.has_coalgebra and hopf:
        comult = b.comult * (vals[:, None, None] == vals[None, :, None] + vals[None, None, :])
        counit = b.counit
    weights = dict(b.weights)
    weights[weight_name or f.name] = vals
    graded = make_algebra(
        b.names, b.degrees, mult=mult, comult=comult, unit=unit, counit=counit, weights=weights,
        label=f"E0({a.label},{f.name})",
    )
    return GradedAlgebraWithProjection(graded, f, rows, vals, joint)
