"""Cyclic bar and cobar complexes, sliced by internal degree.

A basis tuple (i_0, ..., i_{k-1}) of basis indices is encoded as the integer
sum i_j * P**j (factor 0 least significant), P = dim A.  The differential
preserves the topological degree u and every extra weight of the algebra,
so each (n, key) slice is an independent small operator.  For group algebras
the cyclic bar complex is further split by the conjugacy class of the
ordered product of the factors, which every face map preserves.

Degree conventions (all signs vanish mod 2):

* chain, self:    C_n = A^{(n+1)}, faces merge neighbours, the last face is cyclic;
* chain, ground:  C_n = k (x) A^{n}, the outer faces apply the counit;
* cochain, self:  C^n = C^{(n+1)}, cofaces split one factor, the last coface
  splits factor 0 and moves its left half to the end;
* cochain, ground: C^n = k (x) C^{n}, the outer cofaces insert the unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct

import numba as nb
import numpy as np

from .algebras import AlgebraError, StructuredBialgebra, dualize
from .f2linalg import BitMatrix, coo_rank

__all__ = [
    "SliceMap",
    "BigradedComplex",
    "bar_complex",
    "cobar_complex",
    "FilteredComplex",
    "chain_filtration",
    "Cochain",
    "cochain_product",
]


# ----------------------------------------------------------------- kernels

@nb.njit(cache=True)
def _encode(t, lo, hi, P):
    code = 0
    mul = 1
    for i in range(lo, hi):
        code += t[i] * mul
        mul *= P
    return code


@nb.njit(cache=True)
def _bar_images(codes, k, P, mptr, midx, counit, ground):
    """(source position, target code) pairs of all face maps, before mod-2 reduction."""
    m = codes.shape[0]
    t = np.empty(max(k, 1), np.int64)
    # count
    total = 0
    for s in range(m):
        c = codes[s]
        for i in range(k):
            t[i] = c % P
            c //= P
        if ground:
            if k >= 1:
                total += counit[t[0]] + counit[t[k - 1]]
            for i in range(k - 1):
                total += mptr[t[i] * P + t[i + 1] + 1] - mptr[t[i] * P + t[i + 1]]
        elif k >= 2:
            for i in range(k - 1):
                total += mptr[t[i] * P + t[i + 1] + 1] - mptr[t[i] * P + t[i + 1]]
            total += mptr[t[k - 1] * P + t[0] + 1] - mptr[t[k - 1] * P + t[0]]
    src = np.empty(total, np.int64)
    tgt = np.empty(total, np.int64)
    q = 0
    for s in range(m):
        c = codes[s]
        for i in range(k):
            t[i] = c % P
            c //= P
        if ground and k >= 1:
            if counit[t[0]]:
                src[q] = s
                tgt[q] = _encode(t, 1, k, P)
                q += 1
            if counit[t[k - 1]]:
                src[q] = s
                tgt[q] = _encode(t, 0, k - 1, P)
                q += 1
        if ground or k >= 2:
            for i in range(k - 1):
                pw = 1
                for j in range(i):
                    pw *= P
                low = _encode(t, 0, i, P)
                high = _encode(t, i + 2, k, P)
                for r in range(mptr[t[i] * P + t[i + 1]], mptr[t[i] * P + t[i + 1] + 1]):
                    src[q] = s
                    tgt[q] = low + midx[r] * pw + high * pw * P
                    q += 1
        if (not ground) and k >= 2:
            mid = _encode(t, 1, k - 1, P)
            for r in range(mptr[t[k - 1] * P + t[0]], mptr[t[k - 1] * P + t[0] + 1]):
                src[q] = s
                tgt[q] = midx[r] + mid * P
                q += 1
    return src, tgt


@nb.njit(cache=True)
def _cobar_images(codes, k, P, cptr, cl, cr, unit_sup, ground):
    """(source position, target code) pairs of all coface maps, before mod-2 reduction."""
    m = codes.shape[0]
    t = np.empty(max(k, 1), np.int64)
    nu = unit_sup.shape[0]
    total = 0
    for s in range(m):
        c = codes[s]
        for i in range(k):
            t[i] = c % P
            c //= P
        for i in range(k):
            total += cptr[t[i] + 1] - cptr[t[i]]
        if ground:
            total += 2 * nu
        elif k >= 1:
            total += cptr[t[0] + 1] - cptr[t[0]]
    src = np.empty(total, np.int64)
    tgt = np.empty(total, np.int64)
    pk = 1
    for i in range(k):
        pk *= P
    q = 0
    for s in range(m):
        c = codes[s]
        for i in range(k):
            t[i] = c % P
            c //= P
        whole = codes[s]
        if ground:
            for e in range(nu):
                src[q] = s
                tgt[q] = unit_sup[e] + whole * P
                q += 1
                src[q] = s
                tgt[q] = whole + unit_sup[e] * pk
                q += 1
        pw = 1
        for i in range(k):
            low = _encode(t, 0, i, P)
            high = _encode(t, i + 1, k, P)
            for r in range(cptr[t[i]], cptr[t[i] + 1]):
                src[q] = s
                tgt[q] = low + cl[r] * pw + cr[r] * pw * P + high * pw * P * P
                q += 1
            pw *= P
        if (not ground) and k >= 1:
            rest = _encode(t, 1, k, P)
            for r in range(cptr[t[0]], cptr[t[0] + 1]):
                src[q] = s
                tgt[q] = cr[r] + rest * P + cl[r] * pk
                q += 1
    return src, tgt


def _reduce_mod2(src: np.ndarray, tgt: np.ndarray, ntgt: int) -> tuple[np.ndarray, np.ndarray]:
    """Keep the (src, tgt) pairs that occur an odd number of times."""
    if len(src) == 0:
        return src, tgt
    key = src * np.int64(max(ntgt, 1)) + tgt
    key.sort()
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    counts = np.diff(np.r_[starts, len(key)])
    key = key[starts[(counts & 1) == 1]]
    return key // max(ntgt, 1), key % max(ntgt, 1)


# ------------------------------------------------------------------ slices

@dataclass(frozen=True)
class SliceMap:
    """The (co)boundary out of one slice, as its nonzero entries."""

    n: int
    key: tuple
    nsrc: int
    ntgt: int
    src: np.ndarray
    tgt: np.ndarray

    def to_bitmatrix(self) -> BitMatrix:
        """Target-by-source matrix."""
        return BitMatrix.from_coo(self.ntgt, self.nsrc, self.tgt, self.src)

    def rank(self) -> int:
        return coo_rank(self.ntgt, self.nsrc, self.tgt, self.src)

    @property
    def nnz(self) -> int:
        return len(self.src)


class BigradedComplex:
    """Sliced cyclic bar (chain) or cobar (cochain) complex of an algebra.

    Slices are keyed by (u, w_1, ..., w_m[, class]) where the w_i are the
    algebra's extra weights and ``class`` (group algebras only) the
    conjugacy-class sector.  Degrees 0..n_max are available.
    """

    def __init__(
        self,
        algebra: StructuredBialgebra,
        direction: str,
        coeff: str,
        n_max: int,
        u_max: int | None = None,
        verify: bool = True,
    ):
        if direction not in ("chain", "cochain"):
            raise ValueError("direction must be chain or cochain")
        if coeff not in ("self", "ground"):
            raise ValueError("coefficients must be self or ground")
        if direction == "chain" and not algebra.has_algebra:
            raise AlgebraError("structure", "bar complex needs a multiplication")
        if direction == "cochain" and not algebra.has_coalgebra:
            raise AlgebraError("structure", "cobar complex needs a comultiplication")
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        self.algebra = algebra
        self.direction = direction
        self.coeff = coeff
        self.n_max = n_max
        top = int(np.max(algebra.degrees)) if algebra.dim else 0
        self.u_max = top * self.ndigits(n_max) if u_max is None else u_max
        self.weight_names = tuple(sorted(algebra.weights))
        self.grading_names = ("u",) + self.weight_names
        self.class_sectors = algebra.group is not None and direction == "chain" and coeff == "self"
        self._slices: dict[int, dict[tuple, np.ndarray]] = {}
        if verify:
            self.check_d_squared()

    # ---- bookkeeping
    @property
    def P(self) -> int:
        return self.algebra.dim

    @property
    def degree_name(self) -> str:
        return "n" if self.direction == "chain" else "s"

    def ndigits(self, n: int) -> int:
        return n + 1 if self.coeff == "self" else n

    def target_degree(self, n: int) -> int:
        return n - 1 if self.direction == "chain" else n + 1

    def source_degree_into(self, n: int) -> int:
        return n + 1 if self.direction == "chain" else n - 1

    def has_degree(self, n: int) -> bool:
        return 0 <= n <= self.n_max

    def public_key(self, key: tuple) -> tuple:
        return key[: len(self.grading_names)]

    def _gradings(self) -> list[np.ndarray]:
        return [np.asarray(self.algebra.degrees, np.int64)] + [
            np.asarray(self.algebra.weights[w], np.int64) for w in self.weight_names
        ]

    def _compute_slices(self, n: int) -> dict[tuple, np.ndarray]:
        k = self.ndigits(n)
        P = self.P
        total = P**k
        codes = np.arange(total, dtype=np.int64)
        grads = self._gradings()
        sums = [np.zeros(total, np.int64) for _ in grads]
        cls = None
        if self.class_sectors:
            g = self.algebra.group
            classes = np.zeros(g.order, np.int64)
            from .algebras import conjugacy_data

            for ci, cc in enumerate(conjugacy_data(g)):
                classes[list(cc.elements)] = ci
            prod = np.full(total, g.identity, np.int64)
        rem = codes.copy()
        for _ in range(k):
            d = rem % P
            rem //= P
            for s, gr in zip(sums, grads):
                s += gr[d]
            if self.class_sectors:
                prod = g.mult_table[prod, d]
        if self.class_sectors:
            cls = classes[prod]
        cols = sums + ([cls] if cls is not None else [])
        keep = sums[0] <= self.u_max
        if not keep.all():
            codes = codes[keep]
            cols = [c[keep] for c in cols]
        if len(codes) == 0:
            return {}
        stacked = np.stack(cols, axis=1)
        uniq, inv = np.unique(stacked, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        order = np.argsort(inv, kind="stable")
        bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
        out = {}
        for i, row in enumerate(uniq):
            out[tuple(int(x) for x in row)] = codes[order[bounds[i]:bounds[i + 1]]]
        return out

    def slices(self, n: int) -> dict[tuple, np.ndarray]:
        """key -> sorted array of tuple codes, for degree n."""
        if n < 0 or n > self.n_max:
            return {}
        if n not in self._slices:
            self._slices[n] = self._compute_slices(n)
        return self._slices[n]

    def keys(self, n: int) -> list[tuple]:
        return sorted(self.slices(n))

    def slice_dim(self, n: int, key: tuple) -> int:
        return len(self.slices(n).get(key, ()))

    def decode(self, code: int, n: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.ndigits(n)):
            out.append(int(code % self.P))
            code //= self.P
        return tuple(out)

    def encode(self, t) -> int:
        code = 0
        for i, x in enumerate(t):
            code += int(x) * self.P**i
        return code

    def key_of(self, t) -> tuple:
        """Slice key of a basis tuple."""
        n = len(t) - (1 if self.coeff == "self" else 0)
        code = self.encode(t)
        for key, codes in self.slices(n).items():
            i = np.searchsorted(codes, code)
            if i < len(codes) and codes[i] == code:
                return key
        raise KeyError(f"tuple {t} lies outside the built range")

    # ---- differential
    @cached_property
    def _tables(self):
        a = self.algebra
        if self.direction == "chain":
            mptr, midx = a.mult_table()
            counit = np.zeros(a.dim, np.int64) if a.counit is None else a.counit.astype(np.int64)
            return mptr, midx, counit
        cptr, cl, cr = a.comult_table()
        unit = a.unit_support if a.unit is not None else np.zeros(0, np.int64)
        return cptr, cl, cr, unit

    def differential(self, n: int, key: tuple) -> SliceMap:
        """The (co)boundary out of slice (n, key), reduced mod 2."""
        codes = self.slices(n).get(key)
        if codes is None:
            raise KeyError(f"no slice {(n, key)}")
        m = self.target_degree(n)
        if m < 0:
            return SliceMap(n, key, len(codes), 0, np.zeros(0, np.int64), np.zeros(0, np.int64))
        if m > self.n_max:
            raise ValueError(f"degree {m} is beyond the built range 0..{self.n_max}")
        k = self.ndigits(n)
        ground = self.coeff == "ground"
        if self.direction == "chain":
            mptr, midx, counit = self._tables
            src, tcode = _bar_images(codes, k, self.P, mptr, midx, counit, ground)
        else:
            cptr, cl, cr, unit = self._tables
            src, tcode = _cobar_images(codes, k, self.P, cptr, cl, cr, unit, ground)
        tcodes = self.slices(m).get(key, np.zeros(0, np.int64))
        tgt = np.searchsorted(tcodes, tcode)
        if len(tcode):
            if len(tcodes) == 0 or np.any(tgt >= len(tcodes)) or np.any(tcodes[np.minimum(tgt, len(tcodes) - 1)] != tcode):
                raise AssertionError(f"differential leaves slice {key}: grading not preserved")
        src, tgt = _reduce_mod2(src, tgt.astype(np.int64), len(tcodes))
        return SliceMap(n, key, len(codes), len(tcodes), src, tgt)

    def matrix(self, n: int, key: tuple) -> BitMatrix:
        return self.differential(n, key).to_bitmatrix()

    def check_d_squared(self, n_limit: int | None = None) -> None:
        """Verify d o d = 0 on every composable pair of slices."""
        import scipy.sparse as sp

        top = self.n_max if n_limit is None else min(self.n_max, n_limit)
        for n in range(top + 1):
            m = self.target_degree(n)
            l = self.target_degree(m)
            if not (0 <= l <= self.n_max and 0 <= m <= self.n_max):
                continue
            for key in self.keys(n):
                if key not in self.slices(m):
                    continue
                d1 = self.differential(n, key)
                d2 = self.differential(m, key)
                a = sp.csr_matrix((np.ones(d1.nnz, np.int64), (d1.tgt, d1.src)), shape=(d1.ntgt, d1.nsrc))
                b = sp.csr_matrix((np.ones(d2.nnz, np.int64), (d2.tgt, d2.src)), shape=(d2.ntgt, d2.nsrc))
                prod = (b @ a).tocoo()
                if np.any(prod.data & 1):
                    raise AssertionError(f"d o d != 0 at degree {n}, slice {key}")

    # ---- sparse element arithmetic (for probes and products)
    def apply(self, c: "Cochain") -> "Cochain":
        """The (co)boundary of an element given as a set of basis tuples."""
        a = self.algebra
        out: dict[tuple, int] = {}

        def add(t):
            out[t] = out.get(t, 0) ^ 1

        ground = self.coeff == "ground"
        if self.direction == "cochain":
            cptr, cl, cr, unit = self._tables
            for t in c.terms:
                k = len(t)
                if ground:
                    for e in unit:
                        add((int(e),) + t)
                        add(t + (int(e),))
                for i in range(k):
                    for r in range(cptr[t[i]], cptr[t[i] + 1]):
                        add(t[:i] + (int(cl[r]), int(cr[r])) + t[i + 1:])
                if not ground and k >= 1:
                    for r in range(cptr[t[0]], cptr[t[0] + 1]):
                        add((int(cr[r]),) + t[1:] + (int(cl[r]),))
            return Cochain(c.degree + 1, frozenset(t for t, v in out.items() if v))
        mptr, midx, counit = self._tables
        P = a.dim
        for t in c.terms:
            k = len(t)
            if ground and k >= 1:
                if counit[t[0]]:
                    add(t[1:])
                if counit[t[-1]]:
                    add(t[:-1])
            if ground or k >= 2:
                for i in range(k - 1):
                    for r in range(mptr[t[i] * P + t[i + 1]], mptr[t[i] * P + t[i + 1] + 1]):
                        add(t[:i] + (int(midx[r]),) + t[i + 2:])
            if not ground and k >= 2:
                for r in range(mptr[t[-1] * P + t[0]], mptr[t[-1] * P + t[0] + 1]):
                    add((int(midx[r]),) + t[1:-1])
        return Cochain(c.degree - 1, frozenset(t for t, v in out.items() if v))

    def element(self, *words) -> "Cochain":
        """Sum of basis tuples, each given as a sequence of basis names."""
        terms: dict[tuple, int] = {}
        degree = None
        for w in words:
            t = tuple(self.algebra.index(x) for x in w)
            d = len(t) - (1 if self.coeff == "self" else 0)
            if degree is not None and d != degree:
                raise ValueError("terms of different degrees")
            degree = d
            terms[t] = terms.get(t, 0) ^ 1
        if degree is None:
            raise ValueError("empty element")
        return Cochain(degree, frozenset(t for t, v in terms.items() if v))

    def __repr__(self) -> str:
        return f"BigradedComplex({self.algebra.label}, {self.direction}, {self.coeff}, n<={self.n_max}, u<={self.u_max})"


def bar_complex(a: StructuredBialgebra, coeff: str = "self", n_max: int = 3, u_max: int | None = None, verify: bool = True) -> BigradedComplex:
    """Cyclic bar complex A (x) A^{n} (self) or k (x) A^{n} (ground)."""
    return BigradedComplex(a, "chain", coeff, n_max, u_max, verify)


def cobar_complex(c: StructuredBialgebra, coeff: str = "self", n_max: int = 3, u_max: int | None = None, verify: bool = True) -> BigradedComplex:
    """Cyclic cobar complex of a coalgebra (self) or the classical cobar complex (ground)."""
    return BigradedComplex(c, "cochain", coeff, n_max, u_max, verify)


# ------------------------------------------------------------- filtrations

class FilteredComplex:
    """A complex with a per-basis-element filtration value, summed over factors.

    Chain complexes are filtered by F_t = span of tuples of value >= t and
    cochain complexes (built on duals) by F_t = span of tuples of value <= t;
    in both cases the differential preserves F_t.
    """

    def __init__(self, complex: BigradedComplex, values, name: str = "filtration"):
        values = np.asarray(values, np.int64)
        if values.shape != (complex.algebra.dim,):
            raise ValueError("one filtration value per basis element")
        self.complex = complex
        self.values = values
        self.name = name

    def chain_value(self, t) -> int:
        return int(sum(self.values[i] for i in t))

    def slice_values(self, n: int, key: tuple) -> np.ndarray:
        codes = self.complex.slices(n).get(key, np.zeros(0, np.int64))
        tot = np.zeros(len(codes), np.int64)
        P = self.complex.P
        rem = codes.copy()
        for _ in range(self.complex.ndigits(n)):
            tot += self.values[rem % P]
            rem //= P
        return tot

    @property
    def sense(self) -> int:
        """+1 if F_t is 'value >= t' (chain), -1 if 'value <= t' (cochain)."""
        return 1 if self.complex.direction == "chain" else -1

    def check(self, n_limit: int = 3) -> None:
        """Verify the differential preserves the filtration on low degrees."""
        cx = self.complex
        for n in range(min(cx.n_max, n_limit) + 1):
            m = cx.target_degree(n)
            if not 0 <= m <= cx.n_max:
                continue
            for key in cx.keys(n):
                d = cx.differential(n, key)
                if d.nnz:
                    sv = self.slice_values(n, key)[d.src]
                    tv = self.slice_values(m, key)[d.tgt]
                    if np.any(self.sense * (tv - sv) < 0):
                        raise AssertionError(f"differential does not preserve the filtration at {(n, key)}")

    @property
    def max_value(self) -> int:
        return int(self.values.max()) * self.complex.ndigits(self.complex.n_max) if len(self.values) else 0

    def __repr__(self) -> str:
        return f"FilteredComplex({self.complex!r}, {self.name})"


def chain_filtration(cx: BigradedComplex, f, check: bool = True) -> FilteredComplex:
    """Attach the filtration ``f`` (of cx's algebra or of its dual) to cx.

    The complex must be built on the filtration's adapted basis (or its dual
    basis), which coincides with the canonical basis whenever that basis is
    adapted.
    """
    from .filtrations import Filtration

    if not isinstance(f, Filtration):
        raise TypeError("expected a Filtration")
    b = f.adapted_algebra
    fp = cx.algebra.fingerprint
    if fp == b.fingerprint:
        values = f.values
    elif fp == dualize(b).fingerprint:
        values = f.values
    else:
        raise AlgebraError(
            "filtration",
            "mismatched algebra: build the complex on the filtration's adapted basis or its dual",
        )
    fcx = FilteredComplex(cx, values, f.name)
    if check:
        fcx.check()
    return fcx


# --------------------------------------------------------------- cochains

@dataclass(frozen=True)
class Cochain:
    """An element of a (co)chain group: a set of basis tuples (coefficients 1)."""

    degree: int
    terms: frozenset

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError("cannot add elements of different degrees")
        return Cochain(self.degree, self.terms ^ other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @classmethod
    def zero(cls, degree: int) -> "Cochain":
        return cls(degree, frozenset())

    def names(self, a: StructuredBialgebra) -> list[str]:
        return sorted("|".join(a.names[i] for i in t) for t in self.terms)

    def __repr__(self) -> str:
        return f"Cochain(deg={self.degree}, {sorted(self.terms)})"


def _iterated_coproduct(a: StructuredBialgebra, x: int, parts: int) -> dict[tuple, int]:
    """Delta iterated into ``parts`` tensor factors, as tuple -> coefficient."""
    cur = {(x,): 1}
    for _ in range(parts - 1):
        nxt: dict[tuple, int] = {}
        for t, c in cur.items():
            for p, q in np.argwhere(a.comult[t[-1]]):
                key = t[:-1] + (int(p), int(q))
                nxt[key] = nxt.get(key, 0) ^ c
        cur = {t: 1 for t, c in nxt.items() if c}
    return cur


def _products(a: StructuredBialgebra, x: int, y: int) -> list[int]:
    return [int(z) for z in np.nonzero(a.mult[x, y])[0]]


def cochain_product(cx: BigradedComplex, g1: Cochain, g2: Cochain) -> Cochain:
    """Cup product dual to the chain coproduct followed by Alexander-Whitney.

    For f = a_0|a_1..a_p and g = b_0|b_1..b_q write the iterated coproducts
    a_0 -> sum c_1 (x) .. (x) c_q (x) c_0 and b_0 -> sum d_0 (x) .. (x) d_p.
    Then f.g = sum (c_0 d_0) | (a_1 d_1) .. (a_p d_p) | (c_1 b_1) .. (c_q b_q).
    """
    a = cx.algebra
    if cx.direction != "cochain" or cx.coeff != "self":
        raise AlgebraError("structure", "products need a self-coefficient cobar complex")
    if not a.has_algebra or not a.is_commutative():
        raise AlgebraError("structure", "products need a commutative algebra structure on the coalgebra")
    for g in (g1, g2):
        if any(len(t) != g.degree + 1 for t in g.terms):
            raise ValueError(f"shape mismatch: terms of {g} do not have {g.degree + 1} factors")
    p, q = g1.degree, g2.degree
    out: dict[tuple, int] = {}
    for f in g1.terms:
        split_a = _iterated_coproduct(a, f[0], q + 1)
        for g in g2.terms:
            split_b = _iterated_coproduct(a, g[0], p + 1)
            for ca in split_a:
                c0 = ca[-1]
                for db in split_b:
                    slots = [_products(a, c0, db[0])]
                    slots += [_products(a, f[i], db[i]) for i in range(1, p + 1)]
                    slots += [_products(a, ca[j - 1], g[j]) for j in range(1, q + 1)]
                    for t in iproduct(*slots):
                        out[t] = out.get(t, 0) ^ 1
    return Cochain(p + q, frozenset(t for t, v in out.items() if v))
