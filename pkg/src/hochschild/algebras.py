"""Finite-dimensional graded algebras, coalgebras and Hopf algebras over F2.

Structure constants are stored as uint8 tensors:

* ``mult[a, b, c]`` is the coefficient of ``e_c`` in ``e_a e_b``;
* ``comult[c, a, b]`` is the coefficient of ``e_a (x) e_b`` in ``Delta(e_c)``.

Dualizing swaps the two tensors (with the index shuffle above), so the double
dual has literally the same constants.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .f2linalg import BitMatrix, Subspace, solve

__all__ = [
    "AlgebraError",
    "StructuredBialgebra",
    "make_algebra",
    "dualize",
    "builtin",
    "BUILTIN_NAMES",
    "FiniteGroup",
    "finite_group",
    "GROUP_NAMES",
    "group_algebra",
    "ConjugacyClass",
    "conjugacy_data",
    "IsoReport",
    "verify_dihedral_iso",
]


class AlgebraError(ValueError):
    """Structured validation failure; ``triple`` names the offending basis indices."""

    def __init__(self, kind: str, message: str, triple: tuple = ()):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.triple = tuple(triple)


def _mod2(x: np.ndarray) -> np.ndarray:
    return (np.asarray(x) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class StructuredBialgebra:
    names: tuple[str, ...]
    degrees: np.ndarray
    mult: np.ndarray | None = None
    comult: np.ndarray | None = None
    unit: np.ndarray | None = None
    counit: np.ndarray | None = None
    weights: dict = field(default_factory=dict)
    group: "FiniteGroup | None" = None
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def has_algebra(self) -> bool:
        return self.mult is not None

    @property
    def has_coalgebra(self) -> bool:
        return self.comult is not None

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.dim, tuple(int(d) for d in self.degrees))).encode())
        for name in sorted(self.weights):
            h.update(name.encode() + np.asarray(self.weights[name], np.int64).tobytes())
        for arr in (self.mult, self.comult, self.unit, self.counit):
            h.update(b"-" if arr is None else np.ascontiguousarray(arr, np.uint8).tobytes())
        if self.group is not None:
            h.update(b"G" + np.ascontiguousarray(self.group.mult_table, np.int64).tobytes())
        return h.hexdigest()

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis element named {name!r}") from None

    def element(self, name: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.uint8)
        v[self.index(name)] = 1
        return v

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.uint8)
        v[i] = 1
        return v

    def multiply(self, x, y) -> np.ndarray:
        """Product of two vectors."""
        if self.mult is None:
            raise AlgebraError("structure", "no multiplication")
        x = np.asarray(x, np.int64)
        y = np.asarray(y, np.int64)
        return _mod2(np.einsum("a,b,abc->c", x, y, self.mult.astype(np.int64)))

    def coproduct(self, x) -> np.ndarray:
        """Coproduct of a vector as a dim x dim 0/1 matrix."""
        if self.comult is None:
            raise AlgebraError("structure", "no comultiplication")
        return _mod2(np.einsum("c,cab->ab", np.asarray(x, np.int64), self.comult.astype(np.int64)))

    def is_commutative(self) -> bool:
        return self.mult is not None and bool(np.array_equal(self.mult, self.mult.transpose(1, 0, 2)))

    def is_cocommutative(self) -> bool:
        return self.comult is not None and bool(np.array_equal(self.comult, self.comult.transpose(0, 2, 1)))

    def poincare_polynomial(self) -> dict[int, int]:
        vals, counts = np.unique(np.asarray(self.degrees), return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    @cached_property
    def unit_support(self) -> np.ndarray:
        return np.nonzero(self.unit)[0].astype(np.int64) if self.unit is not None else np.zeros(0, np.int64)

    def mult_table(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR over pairs a*dim+b listing the c with mult[a,b,c] = 1."""
        p = self.dim
        nz = np.argwhere(self.mult.reshape(p * p, p))
        ptr = np.searchsorted(nz[:, 0], np.arange(p * p + 1)).astype(np.int64)
        return ptr, nz[:, 1].astype(np.int64)

    def comult_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR over c listing the pairs (a, b) with comult[c,a,b] = 1."""
        p = self.dim
        nz = np.argwhere(self.comult)
        ptr = np.searchsorted(nz[:, 0], np.arange(p + 1)).astype(np.int64)
        return ptr, nz[:, 1].astype(np.int64), nz[:, 2].astype(np.int64)

    def change_basis(self, rows, names=None, label: str | None = None) -> "StructuredBialgebra":
        """Re-express in the basis whose i-th vector is ``rows[i]`` (old coordinates).

        Coalgebra data transforms contragrediently so the result is the same
        bialgebra.  Weights survive only if every new basis vector is
        homogeneous for them.
        """
        p = np.asarray(rows, np.int64) & 1
        n = self.dim
        q = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            e = np.zeros(n, np.uint8)
            e[j] = 1
            x = solve(BitMatrix.from_dense(p.T), e)
            if x is None:
                raise AlgebraError("basis", "change-of-basis matrix is singular")
            q[j] = x  # old e_j = sum_i q[j, i] new_i
        degrees = np.zeros(n, np.int64)
        for i in range(n):
            ds = set(np.asarray(self.degrees)[np.nonzero(p[i])[0]].tolist())
            if len(ds) != 1:
                raise AlgebraError("grading", f"new basis vector {i} is not homogeneous")
            degrees[i] = ds.pop()
        weights = {}
        for wname, w in self.weights.items():
            w = np.asarray(w)
            vals = [set(w[np.nonzero(p[i])[0]].tolist()) for i in range(n)]
            if all(len(v) == 1 for v in vals):
                weights[wname] = np.array([v.pop() for v in vals], np.int64)
        mult = comult = unit = counit = None
        if self.mult is not None:
            mult = _mod2(np.einsum("ia,jb,abc,ck->ijk", p, p, self.mult.astype(np.int64), q))
            unit = _mod2(np.asarray(self.unit, np.int64) @ q)
        if self.comult is not None:
            # Delta(new_k) = sum p[k,c] Delta(e_c); e_a = sum q[a,i] new_i
            comult = _mod2(np.einsum("kc,cab,ai,bj->kij", p, self.comult.astype(np.int64), q, q))
            counit = _mod2(p @ np.asarray(self.counit, np.int64))
        if names is None:
            names = tuple(self.names[int(np.nonzero(p[i])[0][0])] if p[i].sum() == 1 else f"v{i}" for i in range(n))
        return make_algebra(
            names, degrees, mult=mult, comult=comult, unit=unit, counit=counit,
            weights=weights, label=label if label is not None else self.label,
        )

    def permuted(self, perm) -> "StructuredBialgebra":
        """Same algebra with basis reordered: new basis i is old basis perm[i]."""
        perm = list(perm)
        rows = np.eye(self.dim, dtype=np.uint8)[perm]
        return self.change_basis(rows, names=tuple(self.names[i] for i in perm))

    def __repr__(self) -> str:
        kinds = "+".join(k for k, f in (("alg", self.has_algebra), ("coalg", self.has_coalgebra)) if f)
        return f"StructuredBialgebra({self.label or '?'}, dim={self.dim}, {kinds})"


# ---------------------------------------------------------------- validation

def _first(mask: np.ndarray):
    nz = np.argwhere(mask)
    return tuple(int(i) for i in nz[0]) if len(nz) else None


def _check_grading(names, deg, mult, comult, weight_name="degree"):
    if mult is not None:
        bad = _first(mult.astype(bool) & (deg[:, None, None] + deg[None, :, None] != deg[None, None, :]))
        if bad:
            a, b, c = bad
            raise AlgebraError(
                "grading",
                f"{names[a]} * {names[b]} has a {names[c]} term but {weight_name}s {deg[a]} + {deg[b]} != {deg[c]}",
                bad,
            )
    if comult is not None:
        bad = _first(comult.astype(bool) & (deg[None, :, None] + deg[None, None, :] != deg[:, None, None]))
        if bad:
            c, a, b = bad
            raise AlgebraError(
                "grading",
                f"coproduct of {names[c]} has a {names[a]} (x) {names[b]} term but {weight_name}s {deg[a]} + {deg[b]} != {deg[c]}",
                bad,
            )


def _find_unit(mult: np.ndarray) -> np.ndarray | None:
    n = mult.shape[0]
    # sum_a u_a mult[a,b,c] = delta_bc and sum_a u_a mult[b,a,c] = delta_bc
    rows = np.concatenate([mult.transpose(1, 2, 0).reshape(n * n, n), mult.transpose(0, 2, 1).reshape(n * n, n)])
    rhs = np.concatenate([np.eye(n, dtype=np.uint8).reshape(-1)] * 2)
    return solve(BitMatrix.from_dense(rows), rhs)


def _find_counit(comult: np.ndarray) -> np.ndarray | None:
    n = comult.shape[0]
    # sum_a eps_a comult[c,a,b] = delta_cb and sum_b eps_b comult[c,a,b] = delta_ca
    rows = np.concatenate([comult.transpose(0, 2, 1).reshape(n * n, n), comult.reshape(n * n, n)])
    rhs = np.concatenate([np.eye(n, dtype=np.uint8).reshape(-1)] * 2)
    return solve(BitMatrix.from_dense(rows), rhs)


def _validate(alg: StructuredBialgebra) -> None:
    names, n = alg.names, alg.dim
    deg = np.asarray(alg.degrees, np.int64)
    if np.any(deg < 0):
        raise AlgebraError("grading", "negative degree", (int(np.argmin(deg)),))
    _check_grading(names, deg, alg.mult, alg.comult)
    for wname, w in alg.weights.items():
        w = np.asarray(w, np.int64)
        if w.shape != (n,):
            raise AlgebraError("shape", f"weight {wname!r} has wrong length")
        _check_grading(names, w, alg.mult, alg.comult, weight_name=f"{wname} weight")
    eye = np.eye(n, dtype=np.int64)
    if alg.mult is not None:
        m = alg.mult.astype(np.int64)
        left = np.einsum("abx,xcd->abcd", m, m) & 1
        right = np.einsum("bcy,ayd->abcd", m, m) & 1
        bad = _first(left != right)
        if bad:
            a, b, c, _ = bad
            raise AlgebraError("associativity", f"({names[a]} {names[b]}) {names[c]} != {names[a]} ({names[b]} {names[c]})", (a, b, c))
        u = np.asarray(alg.unit, np.int64)
        lu = np.einsum("a,abc->bc", u, m) & 1
        ru = np.einsum("a,bac->bc", u, m) & 1
        for side, mat in (("left", lu), ("right", ru)):
            bad = _first(mat != eye)
            if bad:
                raise AlgebraError("unit", f"{side} unit law fails at {names[bad[0]]}", bad)
    if alg.comult is not None:
        d = alg.comult.astype(np.int64)
        left = np.einsum("cxz,xab->cabz", d, d) & 1
        right = np.einsum("cax,xbz->cabz", d, d) & 1
        bad = _first(left != right)
        if bad:
            c, a, b, z = bad
            raise AlgebraError("coassociativity", f"coassociativity fails on {names[c]} at component {names[a]} (x) {names[b]} (x) {names[z]}", (c, a, b))
        e = np.asarray(alg.counit, np.int64)
        le = np.einsum("a,cab->cb", e, d) & 1
        re_ = np.einsum("b,cab->ca", e, d) & 1
        for side, mat in (("left", le), ("right", re_)):
            bad = _first(mat != eye)
            if bad:
                raise AlgebraError("counit", f"{side} counit law fails at {names[bad[0]]}", bad)
    if alg.mult is not None and alg.comult is not None:
        m = alg.mult.astype(np.int64)
        d = alg.comult.astype(np.int64)
        lhs = np.einsum("abc,cpq->abpq", m, d) & 1
        rhs = np.einsum("apq,brs,prx,qsy->abxy", d, d, m, m) & 1
        bad = _first(lhs != rhs)
        if bad:
            a, b, _, _ = bad
            raise AlgebraError("hopf", f"Delta({names[a]} {names[b]}) != Delta({names[a]}) Delta({names[b]})", (a, b))
        u = np.asarray(alg.unit, np.int64)
        e = np.asarray(alg.counit, np.int64)
        if not np.array_equal(np.einsum("c,cab->ab", u, d) & 1, np.outer(u, u) & 1):
            raise AlgebraError("hopf", "Delta(1) != 1 (x) 1")
        if not np.array_equal(np.einsum("abc,c->ab", m, e) & 1, np.outer(e, e) & 1):
            raise AlgebraError("hopf", "counit is not multiplicative")
        if int(u @ e) & 1 != 1:
            raise AlgebraError("hopf", "counit(1) != 1")


def make_algebra(
    names,
    degrees,
    mult=None,
    comult=None,
    unit=None,
    counit=None,
    weights=None,
    group=None,
    label: str = "",
) -> StructuredBialgebra:
    """Build and validate an algebra and/or coalgebra from structure constants.

    A missing unit (counit) is solved for; failing that construction raises.
    """
    names = tuple(str(s) for s in names)
    n = len(names)
    if len(set(names)) != n:
        raise AlgebraError("shape", "duplicate basis names")
    degrees = np.array(degrees, dtype=np.int64).reshape(-1)
    if degrees.shape != (n,):
        raise AlgebraError("shape", f"{len(degrees)} degrees for {n} basis elements")
    if mult is None and comult is None:
        raise AlgebraError("shape", "need a multiplication or a comultiplication")

    def tensor(t, what):
        if t is None:
            return None
        t = np.asarray(t)
        if t.shape != (n, n, n):
            raise AlgebraError("shape", f"{what} tensor has shape {t.shape}, expected {(n, n, n)}")
        if np.any((t != 0) & (t != 1)):
            raise AlgebraError("shape", f"{what} tensor has entries outside {{0, 1}}")
        t = t.astype(np.uint8)
        t.flags.writeable = False
        return t

    mult = tensor(mult, "multiplication")
    comult = tensor(comult, "comultiplication")
    if mult is not None:
        _check_grading(names, degrees, mult, None)
        if unit is None:
            unit = _find_unit(mult)
            if unit is None:
                raise AlgebraError("unit", "multiplication has no two-sided unit")
        unit = _mod2(np.asarray(unit).reshape(n))
    else:
        unit = None if unit is None else _mod2(np.asarray(unit).reshape(n))
    if comult is not None:
        _check_grading(names, degrees, None, comult)
        if counit is None:
            counit = _find_counit(comult)
            if counit is None:
                raise AlgebraError("counit", "comultiplication has no two-sided counit")
        counit = _mod2(np.asarray(counit).reshape(n))
    else:
        counit = None if counit is None else _mod2(np.asarray(counit).reshape(n))
    weights = {k: np.array(v, dtype=np.int64) for k, v in (weights or {}).items()}
    for arr in [degrees, unit, counit, *weights.values()]:
        if arr is not None:
            arr.flags.writeable = False
    alg = StructuredBialgebra(names, degrees, mult, comult, unit, counit, weights, group, label)
    _validate(alg)
    return alg


def _dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def dualize(a: StructuredBialgebra, names=None, label: str | None = None) -> StructuredBialgebra:
    """Linear dual with the dual basis: products and coproducts trade places."""
    mult = None if a.comult is None else a.comult.transpose(1, 2, 0)
    comult = None if a.mult is None else a.mult.transpose(2, 0, 1)
    if names is None:
        names = tuple(_dual_name(s) for s in a.names)
    if label is None:
        label = _dual_name(a.label) if a.label else ""
    return make_algebra(
        names, a.degrees, mult=mult, comult=comult, unit=a.counit, counit=a.unit,
        weights=dict(a.weights), label=label,
    )


# ------------------------------------------------------------------ builtins

def _monomial_algebra(gens, exps, degs, prim_coproducts, names, weights=None, label=""):
    """Truncated polynomial algebra with coproducts of generators given.

    ``exps`` are the exclusive exponent bounds; basis = monomials in
    lexicographic order with the first generator varying fastest.
    ``prim_coproducts[g]`` lists pairs of exponent vectors (left, right).
    """
    shape = tuple(exps)
    monos = [m[::-1] for m in itertools.product(*[range(e) for e in shape[::-1]])]
    index = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    deg = [sum(e * d for e, d in zip(m, degs)) for m in monos]

    def mono_mul(x, y):
        z = tuple(a + b for a, b in zip(x, y))
        return z if all(v < e for v, e in zip(z, shape)) else None

    mult = np.zeros((n, n, n), np.uint8)
    for x in monos:
        for y in monos:
            z = mono_mul(x, y)
            if z is not None:
                mult[index[x], index[y], index[z]] = 1

    def tens_mul(p, q):
        out = {}
        for (l1, r1), c1 in p.items():
            for (l2, r2), c2 in q.items():
                l, r = mono_mul(l1, l2), mono_mul(r1, r2)
                if l is None or r is None:
                    continue
                out[(l, r)] = out.get((l, r), 0) ^ (c1 & c2)
        return {k: 1 for k, v in out.items() if v}

    zero = tuple(0 for _ in gens)
    comult = np.zeros((n, n, n), np.uint8)
    for m in monos:
        acc = {(zero, zero): 1}
        for g, e in enumerate(m):
            dg = {(tuple(l), tuple(r)): 1 for l, r in prim_coproducts[g]}
            for _ in range(e):
                acc = tens_mul(acc, dg)
        for (l, r) in acc:
            comult[index[m], index[l], index[r]] = 1
    w = {k: [sum(e * d for e, d in zip(m, v)) for m in monos] for k, v in (weights or {}).items()}
    return make_algebra(names(monos), deg, mult=mult, comult=comult, weights=w, label=label)


def _mono_names(symbols):
    def fmt(monos):
        out = []
        for m in monos:
            parts = [s if e == 1 else f"{s}^{e}" for s, e in zip(symbols, m) if e]
            out.append(".".join(parts) if parts else "1")
        return tuple(out)

    return fmt


def _prim(k, i):
    """Exponent pairs for a primitive generator i among k generators."""
    e = [0] * k
    e[i] = 1
    z = [0] * k
    return [(e, z), (z, e)]


def _a1_dual() -> StructuredBialgebra:
    # xi2 coproduct: xi2 (x) 1 + xi1 (x) xi1^2 + 1 (x) xi2
    d_xi2 = [((0, 1), (0, 0)), ((1, 0), (2, 0)), ((0, 0), (0, 1))]
    return _monomial_algebra(
        ["xi1", "xi2"], [4, 2], [1, 3], [_prim(2, 0), d_xi2], _mono_names(["xi1", "xi2"]), label="a1_dual"
    )


# Names of A(1) basis elements: the dual basis of the xi-monomials, with the
# three named generators spelled out.
_A1_NAMES = ("1", "Sq1", "Sq2", "xi1^3*", "Q0", "xi1.xi2*", "xi1^2.xi2*", "xi1^3.xi2*")


def _e0may_dual() -> StructuredBialgebra:
    d_xi20 = [((0, 0, 1), (0, 0, 0)), ((1, 0, 0), (0, 1, 0)), ((0, 0, 0), (0, 0, 1))]
    return _monomial_algebra(
        ["xi10", "xi11", "xi20"], [2, 2, 2], [1, 2, 3], [_prim(3, 0), _prim(3, 1), d_xi20],
        _mono_names(["xi10", "xi11", "xi20"]), weights={"may": [1, 1, 2]}, label="e0may_dual",
    )


def _e0ab_dual() -> StructuredBialgebra:
    return _monomial_algebra(
        ["xi10", "xi20"], [4, 2], [1, 3], [_prim(2, 0), _prim(2, 1)],
        _mono_names(["xi10", "xi20"]), weights={"ab": [1, 4]}, label="e0ab_dual",
    )


def _generator_dual_names(dual: StructuredBialgebra, rename: dict) -> tuple[str, ...]:
    return tuple(rename.get(s, _dual_name(s)) for s in dual.names)


def _exterior1() -> StructuredBialgebra:
    return _monomial_algebra(["x"], [2], [1], [_prim(1, 0)], _mono_names(["x"]), label="exterior1")


def _truncpoly2() -> StructuredBialgebra:
    d_y = [((0, 1), (0, 0)), ((1, 0), (1, 0)), ((0, 0), (0, 1))]
    return _monomial_algebra(["x", "y"], [2, 2], [1, 2], [_prim(2, 0), d_y], _mono_names(["x", "y"]), label="truncpoly2")


BUILTIN_NAMES = (
    "a1", "a1_dual", "e0may", "e0may_dual", "e0ab", "e0ab_dual", "d8_group_algebra", "exterior1", "truncpoly2",
)

_BUILTIN_CACHE: dict[str, StructuredBialgebra] = {}


def builtin(name: str) -> StructuredBialgebra:
    """One of the named algebras in ``BUILTIN_NAMES``."""
    if name in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[name]
    if name == "a1_dual":
        alg = _a1_dual()
    elif name == "a1":
        alg = dualize(builtin("a1_dual"), names=_A1_NAMES, label="a1")
    elif name == "e0may_dual":
        alg = _e0may_dual()
    elif name == "e0may":
        alg = dualize(builtin("e0may_dual"), names=_generator_dual_names(
            builtin("e0may_dual"), {"1": "1", "xi10": "Sq1", "xi11": "Sq2", "xi20": "Q0"}), label="e0may")
    elif name == "e0ab_dual":
        alg = _e0ab_dual()
    elif name == "e0ab":
        alg = dualize(builtin("e0ab_dual"), names=_generator_dual_names(
            builtin("e0ab_dual"), {"1": "1", "xi10": "Sq1", "xi10^2": "Sq2", "xi20": "Q0"}), label="e0ab")
    elif name == "d8_group_algebra":
        alg = group_algebra(finite_group("D8"), label="d8_group_algebra")
    elif name == "exterior1":
        alg = _exterior1()
    elif name == "truncpoly2":
        alg = _truncpoly2()
    else:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    _BUILTIN_CACHE[name] = alg
    return alg


# -------------------------------------------------------------------- groups

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mult_table: np.ndarray
    identity: int = 0
    names: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        t = np.array(self.mult_table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise AlgebraError("group", "multiplication table must be an order x order index table")
        e = self.identity
        if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
            raise AlgebraError("group", f"element {e} is not an identity")
        # associativity: (ab)c == a(bc)
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
        bad = _first(lhs != rhs)
        if bad:
            raise AlgebraError("group", "multiplication table is not associative", bad)
        for g in range(n):
            if not np.any(t[g] == e):
                raise AlgebraError("group", f"element {g} has no inverse", (g,))
        for row in t:
            if len(set(row.tolist())) != n:
                raise AlgebraError("group", "table rows are not permutations")
        t.flags.writeable = False
        object.__setattr__(self, "mult_table", t)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(n)))

    @property
    def order(self) -> int:
        return self.mult_table.shape[0]

    def mul(self, g: int, h: int) -> int:
        return int(self.mult_table[g, h])

    def inverse(self, g: int) -> int:
        return int(np.nonzero(self.mult_table[g] == self.identity)[0][0])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult_table, self.mult_table.T))

    def subgroup(self, elements, label: str = "") -> "FiniteGroup":
        """The subgroup on ``elements`` (closed under products), reindexed."""
        elements = sorted(int(x) for x in elements)
        pos = {g: i for i, g in enumerate(elements)}
        try:
            table = [[pos[self.mul(a, b)] for b in elements] for a in elements]
        except KeyError:
            raise AlgebraError("group", "elements are not closed under multiplication") from None
        return FiniteGroup(np.array(table), pos[self.identity], tuple(self.names[g] for g in elements), label)

    def abelianization_rank(self) -> int:
        """dim over F2 of G_ab (x) F2, i.e. of G / (commutators, squares)."""
        n = self.order
        gens = {self.identity}
        for a in range(n):
            gens.add(self.mul(a, a))
            for b in range(n):
                gens.add(self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b))))
        sub = set(gens)
        while True:
            new = {self.mul(x, y) for x in sub for y in sub} | sub
            if new == sub:
                break
            sub = new
        index = n // len(sub)
        return int(round(np.log2(index)))


def _table_from_perms(gens: list[tuple[int, ...]], gen_names: list[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Close permutation generators under composition; elements named by shortlex words."""
    ident = tuple(range(len(gens[0])))

    def compose(p, q):  # apply q then p ... written as word order p*q = "p then q" on the right
        return tuple(p[q[i]] for i in range(len(q)))

    elems = [ident]
    words = [""]
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for g, gn in zip(gens, gen_names):
                x = compose(elems[i], g)
                if x not in elems:
                    elems.append(x)
                    words.append(words[i] + gn)
                    nxt.append(len(elems) - 1)
        frontier = nxt
    index = {e: i for i, e in enumerate(elems)}
    table = np.array([[index[compose(a, b)] for b in elems] for a in elems])
    return table, tuple(w or "1" for w in words)


GROUP_NAMES = ("trivial", "C2", "C4", "C2xC2", "D8")


def finite_group(name: str) -> FiniteGroup:
    """Hardcoded small groups by name."""
    if name == "trivial":
        return FiniteGroup(np.zeros((1, 1), np.int64), 0, ("1",), "trivial")
    if name == "C2":
        return FiniteGroup(np.array([[0, 1], [1, 0]]), 0, ("1", "a"), "C2")
    if name == "C4":
        t = (np.arange(4)[:, None] + np.arange(4)[None, :]) % 4
        return FiniteGroup(t, 0, ("1", "a", "a^2", "a^3"), "C4")
    if name == "C2xC2":
        t = np.arange(4)[:, None] ^ np.arange(4)[None, :]
        return FiniteGroup(t, 0, ("1", "a", "b", "ab"), "C2xC2")
    if name == "D8":
        # symmetries of a square on vertices 0..3: a fixes the diagonal 0-2,
        # b swaps 0<->1 and 2<->3; ab is a quarter turn.
        a = (0, 3, 2, 1)
        b = (1, 0, 3, 2)
        table, names = _table_from_perms([a, b], ["a", "b"])
        return FiniteGroup(table, 0, names, "D8")
    raise KeyError(f"unknown group {name!r}; choose from {', '.join(GROUP_NAMES)}")


def group_algebra(g: FiniteGroup, label: str = "") -> StructuredBialgebra:
    """F2[G]: basis = group elements, Delta(g) = g (x) g, all degrees 0."""
    n = g.order
    mult = np.zeros((n, n, n), np.uint8)
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    mult[a, b, g.mult_table] = 1
    comult = np.zeros((n, n, n), np.uint8)
    comult[np.arange(n), np.arange(n), np.arange(n)] = 1
    return make_algebra(
        g.names, np.zeros(n, np.int64), mult=mult, comult=comult, group=g, label=label or f"F2[{g.label}]"
    )


@dataclass(frozen=True)
class ConjugacyClass:
    elements: tuple[int, ...]
    centralizer_elements: tuple[int, ...]
    centralizer: FiniteGroup


def conjugacy_data(g: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes (ordered by smallest element) with their centralizers."""
    seen: set[int] = set()
    out = []
    for x in range(g.order):
        if x in seen:
            continue
        cls = sorted({g.mul(g.mul(h, x), g.inverse(h)) for h in range(g.order)})
        seen.update(cls)
        cent = tuple(h for h in range(g.order) if g.mul(h, x) == g.mul(x, h))
        out.append(ConjugacyClass(tuple(cls), cent, g.subgroup(cent, label=f"C({g.names[x]})")))
    return out


# --------------------------------------------------------- dihedral iso check

@dataclass(frozen=True)
class IsoReport:
    ok: bool
    bijective: bool
    homomorphism: bool
    identity_ok: bool
    failing_pair: tuple[str, str] | None
    images: dict

    def __bool__(self) -> bool:
        return self.ok


def verify_dihedral_iso(target: StructuredBialgebra | None = None, gen_images=("Sq1", "Sq2")) -> IsoReport:
    """Check that a -> 1 + x, b -> 1 + y defines an isomorphism F2[D8] -> target.

    ``x`` and ``y`` are the basis elements named in ``gen_images``.  The
    default target is the associated graded of A(1) under the May filtration.
    The map is extended multiplicatively along shortlex words, then checked
    on every pair of group elements and for bijectivity.
    """
    if target is None:
        from .filtrations import associated_graded, may_filtration

        a1 = builtin("a1")
        target = associated_graded(a1, may_filtration(a1)).graded
    g = finite_group("D8")
    one = target.unit.astype(np.uint8)
    img_gen = {"a": one ^ target.element(gen_images[0]), "b": one ^ target.element(gen_images[1])}
    images = {}
    for i, word in enumerate(g.names):
        v = one.copy()
        for letter in ("" if word == "1" else word):
            v = target.multiply(v, img_gen[letter])
        images[i] = v
    identity_ok = bool(np.array_equal(images[g.identity], one))
    failing = None
    for x in range(g.order):
        for y in range(g.order):
            if not np.array_equal(target.multiply(images[x], images[y]), images[g.mul(x, y)]):
                failing = (g.names[x], g.names[y])
                break
        if failing:
            break
    mat = np.array([images[i] for i in range(g.order)])
    bij = target.dim == g.order and Subspace.span(target.dim, mat).dim == g.order
    ok = identity_ok and failing is None and bij
    return IsoReport(ok, bij, failing is None, identity_ok, failing, {g.names[i]: images[i] for i in images})
