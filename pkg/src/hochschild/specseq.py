"""Spectral sequences of filtered (co)chain complexes over F2.

Write p for the filtration index: the chain value for chain complexes and
(top value - value) for cochain complexes.  Then F_p = span{index >= p} is
preserved by d in both cases and the sequence is the standard one,

    Z_r^p = {x in F_p : dx in F_{p+r}},
    E_r^p = Z_r^p / (d Z_{r-1}^{p-r+1} + Z_{r-1}^{p+1}),   d_r : E_r^p -> E_r^{p+r}.

All dimensions follow from one number per differential slice,
rho(a, b) = rank of d restricted to sources of index >= a and projected
onto targets of index < b.  It is read off a single echelon form whose
vectors are inserted in filtration order (a "pivot profile"): the pivots
created by a prefix of the vectors are the echelon pivots of their span.
With z(r, p) = dim Z_r^p = |F_p| - rho(p, p + r):

    dim E_r^p   = z(r, p) - z(r-1, p+1) - z'(r-1, p-r+1) + z'(r, p-r+1)
    rank d_r^p  = z(r, p) - z(r+1, p) - z(r-1, p+1) + z(r, p+1)

where z' refers to the degree whose differential lands in the given one.
"""

from __future__ import annotations

import hashlib
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebras import AlgebraError, StructuredBialgebra, builtin, dualize
from .cache import RankCache, default_cache
from .complexes import (
    BigradedComplex,
    Cochain,
    FilteredComplex,
    chain_filtration,
    cobar_complex,
    bar_complex,
    cochain_product,
)
from .f2linalg import BitMatrix, _csr, solve, sparse_echelon
from .filtrations import (
    Filtration,
    abelianizing_filtration,
    associated_graded,
    may_filtration,
)
from .homology import DimTable, cohh, homology_dims

__all__ = [
    "pivot_profile",
    "SpectralPages",
    "pages",
    "e1_check",
    "convergence_check",
    "CheckReport",
    "ClassRegistry",
    "ProbeResult",
    "probe_differential",
    "leibniz_check",
    "SpectralConfig",
    "configuration",
    "CONFIG_NAMES",
]


# ----------------------------------------------------------- pivot profiles

def _index(fcx: FilteredComplex, n: int, key: tuple, top: int) -> np.ndarray:
    vals = fcx.slice_values(n, key)
    return vals if fcx.sense > 0 else top - vals


def pivot_profile(fcx: FilteredComplex, n: int, key: tuple, top: int) -> np.ndarray:
    """Rows (source index, target index, count) aggregated over the pivots of d out of (n, key)."""
    cx = fcx.complex
    m = cx.target_degree(n)
    d = cx.differential(n, key)
    if d.nnz == 0:
        return np.zeros((0, 3), np.int64)
    si = _index(fcx, n, key, top)
    ti = _index(fcx, m, key, top)
    if np.any(ti[d.tgt] < si[d.src]):
        raise AlgebraError("filtration", f"differential does not respect the filtration at {(n, key)}")
    if d.nsrc >= d.ntgt:
        vorder = np.argsort(-si, kind="stable")
        corder = np.argsort(ti, kind="stable")
        vpos = np.empty_like(vorder)
        vpos[vorder] = np.arange(len(vorder))
        cpos = np.empty_like(corder)
        cpos[corder] = np.arange(len(corder))
        ptr, idx = _csr(vpos[d.src], cpos[d.tgt], d.nsrc)
        pc, pv = sparse_echelon(ptr, idx, d.ntgt)
        src, tgt = si[vorder[pv]], ti[corder[pc]]
    else:
        vorder = np.argsort(ti, kind="stable")
        corder = np.argsort(-si, kind="stable")
        vpos = np.empty_like(vorder)
        vpos[vorder] = np.arange(len(vorder))
        cpos = np.empty_like(corder)
        cpos[corder] = np.arange(len(corder))
        ptr, idx = _csr(vpos[d.tgt], cpos[d.src], d.ntgt)
        pc, pv = sparse_echelon(ptr, idx, d.nsrc)
        src, tgt = si[corder[pc]], ti[vorder[pv]]
    if len(src) == 0:
        return np.zeros((0, 3), np.int64)
    pairs, counts = np.unique(np.stack([src, tgt], axis=1), axis=0, return_counts=True)
    return np.concatenate([pairs, counts[:, None]], axis=1).astype(np.int64)


def _values_digest(fcx: FilteredComplex) -> str:
    return hashlib.sha256(np.asarray(fcx.values, np.int64).tobytes()).hexdigest()[:16]


_WORKER: dict = {}


def _worker_profile(args) -> list:
    alg, direction, coeff, n_max, u_max, values, name, n, key, top = args
    ck = (alg.fingerprint, direction, coeff, n_max, u_max, tuple(values))
    fcx = _WORKER.get(ck)
    if fcx is None:
        cx = BigradedComplex(alg, direction, coeff, n_max, u_max, verify=False)
        fcx = FilteredComplex(cx, values, name)
        _WORKER.clear()
        _WORKER[ck] = fcx
    return pivot_profile(fcx, n, key, top).tolist()


def _profiles(fcx: FilteredComplex, todo, top: int, cache: RankCache, jobs: int) -> dict:
    cx = fcx.complex
    digest = _values_digest(fcx)

    def ckey(n, key):
        return [cx.algebra.fingerprint, cx.direction, cx.coeff, n, list(key), "profile", digest, top]

    out = {}
    missing = []
    for n, key in todo:
        hit = cache.get(ckey(n, key))
        if hit is None:
            missing.append((n, key))
        else:
            out[(n, key)] = np.asarray(hit, np.int64).reshape(-1, 3)
    if jobs > 1 and len(missing) > 1:
        args = [
            (cx.algebra, cx.direction, cx.coeff, cx.n_max, cx.u_max, fcx.values.tolist(), fcx.name, n, key, top)
            for n, key in missing
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker_profile, args))
    else:
        results = [pivot_profile(fcx, n, key, top).tolist() for n, key in missing]
    for nk, res in zip(missing, results):
        cache.put(ckey(*nk), res)
        out[nk] = np.asarray(res, np.int64).reshape(-1, 3)
    return out


class _SliceData:
    """Filtration sizes and cumulative pivot counts of one slice."""

    def __init__(self, idx: np.ndarray, profile: np.ndarray | None, top: int):
        self.top = top
        w = top + 2
        cnt = np.bincount(idx, minlength=w)[:w] if len(idx) else np.zeros(w, np.int64)
        self.fsize = np.concatenate([np.cumsum(cnt[::-1])[::-1], [0]])  # fsize[p] = #idx >= p
        self.cum = np.zeros((w + 1, w + 1), np.int64)
        if profile is not None and len(profile):
            h = np.zeros((w + 1, w + 1), np.int64)
            np.add.at(h, (profile[:, 0], profile[:, 1]), profile[:, 2])
            s = h[::-1].cumsum(0)[::-1]
            self.cum[:, 1:] = s.cumsum(1)[:, :-1]

    def f(self, p):
        return self.fsize[np.clip(p, 0, self.top + 1)]

    def rho(self, a, b):
        hi = self.top + 1
        return self.cum[np.clip(a, 0, hi), np.clip(b, 0, hi)]

    def z(self, r, p):
        return self.f(p) - self.rho(p, p + r)


_EMPTY_CACHE: dict = {}


def _empty(top: int) -> _SliceData:
    if top not in _EMPTY_CACHE:
        _EMPTY_CACHE[top] = _SliceData(np.zeros(0, np.int64), None, top)
    return _EMPTY_CACHE[top]


# ------------------------------------------------------------------- pages

@dataclass
class SpectralPages:
    """Dimensions of E_r and ranks of d_r out of every tridegree, r = 0..r_max."""

    direction: str
    coefficients: str
    top: int
    r_max: int
    degrees: tuple[int, ...]
    dims: list[dict]
    ranks: list[dict]
    advance_checked: int = 0
    advance_failures: list = field(default_factory=list)
    infinity_failures: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def degree_name(self) -> str:
        return "n" if self.direction == "chain" else "s"

    @property
    def names(self) -> tuple[str, str, str]:
        return (self.degree_name, "t", "u")

    def t_of(self, p: int) -> int:
        return p if self.direction == "chain" else self.top - p

    def page(self, r: int) -> DimTable:
        """E_r as a table keyed (s, t, u)."""
        if not 0 <= r <= self.r_max:
            raise ValueError(f"page {r} outside 0..{self.r_max}")
        return DimTable(self.names, dict(self.dims[r]), {}, {**self.meta, "page": r})

    def rank_table(self, r: int) -> DimTable:
        """Ranks of d_r out of each (s, t, u)."""
        return DimTable(self.names, dict(self.ranks[r]), {}, {**self.meta, "page": r, "ranks": True})

    def e_infinity(self) -> DimTable:
        return self.page(self.r_max)

    def row_totals(self, r: int) -> dict[int, int]:
        tot = {s: 0 for s in self.degrees}
        for (s, _, _), v in self.dims[r].items():
            tot[s] += v
        return tot

    def nonzero_differentials(self, r_lo: int, r_hi: int | None = None, s_max: int | None = None) -> list:
        """(r, (s, t, u), rank) for every nonzero d_r with r_lo <= r <= r_hi."""
        r_hi = self.r_max if r_hi is None else r_hi
        out = []
        for r in range(r_lo, r_hi + 1):
            for k, v in sorted(self.ranks[r].items()):
                if v and (s_max is None or k[0] <= s_max):
                    out.append((r, k, v))
        return out

    def degenerates_from(self) -> int:
        """Smallest r with d_r' = 0 for every r' >= r."""
        r = self.r_max + 1
        while r > 0 and not any(self.ranks[r - 1].values()):
            r -= 1
        return r

    def bigraded(self, r: int, name: str = "t") -> DimTable:
        """E_r summed over one of t or u, keyed (s, other)."""
        keep = (self.degree_name, "u" if name == "t" else "t")
        return self.page(r).project(keep)


def _entries(add, s, p_arr, t_of, u, vals):
    for p, v in zip(p_arr, vals):
        if v:
            add((s, t_of(int(p)), u), int(v))


def pages(
    fcx: FilteredComplex,
    r_max: int | None = None,
    s_max: int | None = None,
    cache: RankCache | None = None,
    jobs: int = 1,
) -> SpectralPages:
    """Pages E_0..E_{r_max} for all degrees whose in- and out-maps are built.

    The default r_max is the largest chain value plus one, so the last page
    is E_infinity on the computed range.
    """
    cx = fcx.complex
    cache = default_cache() if cache is None else cache
    top = fcx.max_value
    if r_max is None:
        r_max = top + 1
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    exact = [
        s
        for s in range(cx.n_max + 1)
        if (cx.target_degree(s) < 0 or cx.has_degree(cx.target_degree(s)))
        and (cx.source_degree_into(s) < 0 or cx.has_degree(cx.source_degree_into(s)))
    ]
    if s_max is not None:
        exact = [s for s in exact if s <= s_max]
    if not exact:
        raise ValueError("no degree is fully built; increase the complex's n_max")
    # slices whose out-map enters the formulas: each exact degree and its predecessor
    need = set()
    for s in exact:
        for m in (s, cx.source_degree_into(s)):
            if cx.has_degree(m) and cx.has_degree(cx.target_degree(m)):
                need.add(m)
    todo = [(m, key) for m in sorted(need) for key in cx.keys(m)]
    profs = _profiles(fcx, todo, top, cache, jobs)
    data: dict = {}
    for m in sorted(need | set(exact)):
        for key in cx.keys(m):
            data[(m, key)] = _SliceData(_index(fcx, m, key, top), profs.get((m, key)), top)

    dims = [dict() for _ in range(r_max + 1)]
    ranks = [dict() for _ in range(r_max + 1)]
    P = np.arange(top + 1)
    failures = []
    inf_fail = []
    checked = 0
    pg = SpectralPages(cx.direction, cx.coeff, top, r_max, tuple(exact), dims, ranks)

    def adder(table):
        def add(k, v):
            table[k] = table.get(k, 0) + v
        return add

    for s in exact:
        prev = cx.source_degree_into(s)
        for key in cx.keys(s):
            u = cx.public_key(key)[0]
            cur = data[(s, key)]
            pre = data.get((prev, key), _empty(top))
            e_prev = None
            for r in range(r_max + 1):
                e = cur.z(r, P) - cur.z(r - 1, P + 1) - pre.z(r - 1, P - r + 1) + pre.z(r, P - r + 1)
                rk = cur.z(r, P) - cur.z(r + 1, P) - cur.z(r - 1, P + 1) + cur.z(r, P + 1)
                if np.any(e < 0) or np.any(rk < 0):
                    raise AssertionError(f"negative page dimension at {(s, key, r)}")
                _entries(adder(dims[r]), s, P, pg.t_of, u, e)
                _entries(adder(ranks[r]), s, P, pg.t_of, u, rk)
                if e_prev is not None:
                    rp = r - 1
                    rk_prev = cur.z(rp, P) - cur.z(rp + 1, P) - cur.z(rp - 1, P + 1) + cur.z(rp, P + 1)
                    q = P - rp
                    rk_in = pre.z(rp, q) - pre.z(rp + 1, q) - pre.z(rp - 1, q + 1) + pre.z(rp, q + 1)
                    expect = e_prev - rk_prev - rk_in
                    checked += len(P)
                    for p in np.flatnonzero(expect != e):
                        failures.append((r, (s, pg.t_of(int(p)), u), int(e[p]), int(expect[p])))
                e_prev = e
            # direct E_infinity: (ker cap F_p) / (im cap F_p), graded
            big = top + 2
            ker = cur.f(P) - cur.rho(P, big)
            ker1 = cur.f(P + 1) - cur.rho(P + 1, big)
            im = pre.rho(0, big) - pre.rho(0, P)
            im1 = pre.rho(0, big) - pre.rho(0, P + 1)
            e_inf = (ker - ker1) - (im - im1)
            for p in np.flatnonzero(e_inf != e_prev):
                inf_fail.append(((s, pg.t_of(int(p)), u), int(e_prev[p]), int(e_inf[p])))
            if np.any(rk):
                inf_fail.append(((s, key), "d_r_max nonzero"))
    for table_list in (dims, ranks):
        for tab in table_list:
            for k in [k for k, v in tab.items() if not v]:
                del tab[k]
    pg.advance_checked = checked
    pg.advance_failures = failures
    pg.infinity_failures = inf_fail
    pg.meta = {
        "algebra": cx.algebra.label,
        "direction": cx.direction,
        "coefficients": cx.coeff,
        "filtration": fcx.name,
        "n_max": cx.n_max,
        "u_max": cx.u_max,
        "degrees": list(exact),
        "r_max": r_max,
    }
    return pg


# ------------------------------------------------------------------ checks

@dataclass(frozen=True)
class CheckReport:
    ok: bool
    compared: int
    mismatches: list

    def __bool__(self) -> bool:
        return self.ok


def e1_check(p: SpectralPages, a: StructuredBialgebra, f: Filtration, cache: RankCache | None = None) -> CheckReport:
    """Compare E_1 with the homology of the associated graded's complex.

    For a cochain sequence ``a`` is the algebra whose dual was filtered (the
    complex is the cobar complex of its dual); for a chain sequence it is
    the algebra itself.
    """
    weight = f"_{f.name}_t"
    g = associated_graded(a, f, weight_name=weight).graded
    s_top = max(p.degrees)
    if p.direction == "cochain":
        e0 = dualize(g)
        table = cohh(e0, p.coefficients, s_top, cache, u_max=p.meta.get("u_max"))
    else:
        cx = bar_complex(g, p.coefficients, s_top + 1, u_max=p.meta.get("u_max"), verify=False)
        table = homology_dims(cx, range(s_top + 1), cache)
    table = table.project((table.names[0], weight, "u"))
    got = {k: v for k, v in p.page(1).entries.items() if k[0] in p.degrees}
    want = {k: v for k, v in table.entries.items() if k[0] in p.degrees and v}
    keys = set(got) | set(want)
    bad = sorted((k, got.get(k, 0), want.get(k, 0)) for k in keys if got.get(k, 0) != want.get(k, 0))
    return CheckReport(not bad, len(keys), bad)


def convergence_check(p: SpectralPages, abutment: DimTable) -> CheckReport:
    """Compare sum_t E_infinity^{s,t,u} with the abutment, per (s, u)."""
    ab = abutment.project((abutment.names[0], "u"))
    einf = p.e_infinity().project((p.degree_name, "u"))
    keys = {k for k in set(ab.entries) | set(einf.entries) if k[0] in p.degrees}
    bad = sorted((k, einf.get(k), ab.get(k)) for k in keys if einf.get(k) != ab.get(k))
    stable = not p.infinity_failures
    if not stable:
        bad.append(("not stable at r_max", p.infinity_failures[:3]))
    return CheckReport(not bad, len(keys), bad)


# ------------------------------------------------------------------ probes

class ClassRegistry:
    """Named cocycles of the associated-graded complex and their monomials."""

    def __init__(self, fcx: FilteredComplex, e0: BigradedComplex, generators: dict[str, Cochain], aliases: dict | None = None):
        if e0.algebra.dim != fcx.complex.algebra.dim or e0.coeff != fcx.complex.coeff:
            raise ValueError("registry complex does not match the filtered complex")
        self.fcx = fcx
        self.e0 = e0
        self.names = list(generators)
        self.generators = dict(generators)
        self.aliases = dict(aliases or {})
        self._cache: dict = {}

    def tridegree(self, c: Cochain) -> tuple[int, int, int]:
        degs = {(c.degree, self.fcx.chain_value(t), int(sum(self.e0.algebra.degrees[i] for i in t))) for t in c.terms}
        if len(degs) != 1:
            raise ValueError(f"cochain {c} is not homogeneous")
        return degs.pop()

    def generator_tridegrees(self) -> dict[str, tuple[int, int, int]]:
        return {n: self.tridegree(c) for n, c in self.generators.items()}

    def name_of(self, exps: tuple[int, ...]) -> str:
        parts = []
        for n, e in zip(self.names, exps):
            for alias, (base, power) in self.aliases.items():
                if base == n and e >= power:
                    q, e = divmod(e, power)
                    parts.append(alias if q == 1 else f"{alias}^{q}")
            if e:
                parts.append(n if e == 1 else f"{n}^{e}")
        return "*".join(parts) if parts else "1"

    def product(self, exps: tuple[int, ...]) -> Cochain | None:
        if exps in self._cache:
            return self._cache[exps]
        out = None
        for n, e in zip(self.names, exps):
            for _ in range(e):
                g = self.generators[n]
                out = g if out is None else cochain_product(self.e0, out, g)
        self._cache[exps] = out
        return out

    def monomials(self, tri: tuple[int, int, int]) -> list[tuple[tuple[int, ...], Cochain]]:
        """Nonzero monomials of the given tridegree (s, t, u)."""
        degs = [self.tridegree(self.generators[n]) for n in self.names]
        bounds = [tri[2] // d[2] if d[2] else tri[0] for d in degs]
        out = []
        for exps in itertools.product(*[range(b + 1) for b in bounds]):
            tot = tuple(sum(e * d[i] for e, d in zip(exps, degs)) for i in range(3))
            if tot != tuple(tri) or not any(exps):
                continue
            c = self.product(exps)
            if c:
                out.append((exps, c))
        return out

    @classmethod
    def steenrod(cls, fcx: FilteredComplex, e0: BigradedComplex) -> "ClassRegistry":
        """x10, x20, h10, h11, h20 (with b20 = h20^2) on the cobar complex of A(1)*."""
        a = fcx.complex.algebra
        unit = next(a.names[i] for i in a.unit_support)
        lo, sq, hi = a.names[1], a.names[2], a.names[4]
        cx = fcx.complex

        def el(*w):
            return cx.element(w)

        gens = {
            "x10": el(lo),
            "x20": el(hi),
            "h10": el(unit, lo),
            "h11": el(unit, sq),
            "h20": el(unit, hi),
        }
        return cls(fcx, e0, gens, {"b20": ("h20", 2)})


@dataclass(frozen=True)
class ProbeResult:
    r: int
    source: tuple[int, int, int]
    target: tuple[int, int, int]
    value: Cochain
    is_zero: bool
    terms: tuple[str, ...] | None

    @property
    def name(self) -> str:
        if self.is_zero:
            return "0"
        if self.terms is None:
            return "raw"
        return " + ".join(self.terms)

    def matches(self, expression: str) -> bool:
        """Compare with '0' or a sum of monomial names (order-insensitive)."""
        want = expression.replace(" ", "")
        if want == "0":
            return self.is_zero
        if self.terms is None:
            return False
        return sorted(want.split("+")) == sorted(t.replace(" ", "") for t in self.terms)


class _Prober:
    """Dense linear algebra on the slices around one probe."""

    def __init__(self, fcx: FilteredComplex):
        self.fcx = fcx
        self.cx = fcx.complex
        self.top = fcx.max_value
        self._mats: dict = {}

    def idx_of_value(self, v):
        return v if self.fcx.sense > 0 else self.top - v

    def slice_of(self, c: Cochain) -> tuple:
        keys = {self.cx.key_of(t) for t in c.terms}
        if len(keys) != 1:
            raise ValueError("element is not homogeneous")
        return keys.pop()

    def vector(self, c: Cochain, n: int, key: tuple) -> np.ndarray:
        codes = self.cx.slices(n)[key]
        v = np.zeros(len(codes), np.uint8)
        for t in c.terms:
            v[np.searchsorted(codes, self.cx.encode(t))] ^= 1
        return v

    def cochain(self, v: np.ndarray, n: int, key: tuple) -> Cochain:
        codes = self.cx.slices(n).get(key, np.zeros(0, np.int64))
        return Cochain(n, frozenset(self.cx.decode(int(codes[i]), n) for i in np.flatnonzero(v)))

    def data(self, n: int, key: tuple):
        if (n, key) not in self._mats:
            m = self.cx.target_degree(n)
            if not self.cx.has_degree(m):
                raise ValueError(f"probe needs degree {m}; build the complex with a larger n_max")
            d = self.cx.differential(n, key).to_bitmatrix().to_dense()
            si = _index(self.fcx, n, key, self.top)
            ti = _index(self.fcx, m, key, self.top) if d.shape[0] else np.zeros(0, np.int64)
            self._mats[(n, key)] = (d, si, ti)
        return self._mats[(n, key)]

    def lift(self, y: np.ndarray, n: int, key: tuple, p: int, r: int) -> np.ndarray | None:
        """y + c with c in indices p+1..p+r-1 and d(y + c) in F_{p+r}, or None."""
        d, si, ti = self.data(n, key)
        cols = np.flatnonzero((si > p) & (si < p + r))
        rows = np.flatnonzero(ti < p + r)
        rhs = (d[rows] @ y) & 1
        if not rhs.any():
            return y.copy()
        if len(cols) == 0:
            return None
        c = solve(BitMatrix.from_dense(d[np.ix_(rows, cols)]), rhs)
        if c is None:
            return None
        out = y.copy()
        out[cols] ^= c.astype(np.uint8)
        return out

    def boundary(self, x: np.ndarray, n: int, key: tuple) -> np.ndarray:
        d, _, _ = self.data(n, key)
        return (d @ x) & 1

    def is_zero_class(self, lead: np.ndarray, n_src: int, key: tuple, q: int, r: int) -> bool:
        """Whether an element of Z_r^q with leading part ``lead`` vanishes in E_r^q.

        ``lead`` lives in degree target(n_src); it is zero in E_r iff it is the
        leading part of some dc' with c' of index q-r+1..q and dc' in F_q.
        """
        if not lead.any():
            return True
        if not self.cx.has_degree(n_src) or key not in self.cx.slices(n_src):
            return False
        d, si, ti = self.data(n_src, key)
        cols = np.flatnonzero((si >= q - r + 1) & (si <= q))
        rows = np.flatnonzero(ti <= q)
        if len(cols) == 0:
            return False
        rhs = np.where(ti[rows] == q, lead[rows], 0).astype(np.uint8)
        return solve(BitMatrix.from_dense(d[np.ix_(rows, cols)]), rhs) is not None


def _lead(v: np.ndarray, idx: np.ndarray, q: int) -> np.ndarray:
    out = v.copy()
    out[idx != q] = 0
    return out


def probe_differential(
    fcx: FilteredComplex,
    representative: Cochain,
    r: int,
    registry: ClassRegistry | None = None,
) -> ProbeResult:
    """d_r of the class of a homogeneous associated-graded cocycle.

    Lifts the representative into Z_r, applies d, keeps the leading part in
    filtration t - r (cochains) or t + r (chains) and identifies it with a
    sum of registered monomials when exactly one minimal sum matches.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    pr = _Prober(fcx)
    cx = fcx.complex
    values = {fcx.chain_value(t) for t in representative.terms}
    if len(values) != 1:
        raise ValueError("representative is not homogeneous in filtration")
    t = values.pop()
    n = representative.degree
    key = pr.slice_of(representative)
    u = cx.public_key(key)[0]
    p = pr.idx_of_value(t)
    y = pr.vector(representative, n, key)
    lifted = pr.lift(y, n, key, p, r)
    if lifted is None:
        raise ValueError(f"representative does not survive to page {r}")
    m = cx.target_degree(n)
    x = pr.boundary(lifted, n, key)
    q = p + r
    _, _, ti = pr.data(n, key)
    lead = _lead(x, ti, q)
    t2 = q if fcx.sense > 0 else pr.top - q
    source = (n, t, u)
    target = (m, t2, u)
    value = pr.cochain(lead, m, key)
    if pr.is_zero_class(lead, n, key, q, r):
        return ProbeResult(r, source, target, value, True, ())
    terms = None
    if registry is not None:
        terms = _identify(pr, registry, lead, m, key, q, r, target, n)
    return ProbeResult(r, source, target, value, False, terms)


def _identify(pr: _Prober, registry: ClassRegistry, lead, m, key, q, r, target, n_src):
    """The unique minimal sum of surviving, nonzero monomials matching ``lead``."""
    cands = []
    for exps, c in registry.monomials(target):
        try:
            if pr.slice_of(c) != key:
                continue
        except (KeyError, ValueError):
            continue
        v = pr.vector(c, m, key)
        if pr.cx.has_degree(pr.cx.target_degree(m)) and pr.lift(v, m, key, q, r) is None:
            continue
        if pr.is_zero_class(v, n_src, key, q, r):
            continue
        cands.append((registry.name_of(exps), v))
    for size in range(1, len(cands) + 1):
        hits = []
        for combo in itertools.combinations(range(len(cands)), size):
            tot = lead.copy()
            for i in combo:
                tot ^= cands[i][1]
            if pr.is_zero_class(tot, n_src, key, q, r):
                hits.append(combo)
        if len(hits) == 1:
            return tuple(sorted(cands[i][0] for i in hits[0]))
        if hits:
            return None
    return None


def leibniz_check(fcx: FilteredComplex, registry: ClassRegistry, f: str, g: str, r: int) -> bool:
    """Whether d_r(fg) = d_r(f) g + f d_r(g) holds in E_r for two registered names."""
    e0 = registry.e0
    cf = registry.generators[f] if f in registry.generators else registry.product(_parse_monomial(registry, f))
    cg = registry.generators[g] if g in registry.generators else registry.product(_parse_monomial(registry, g))
    fg = cochain_product(e0, cf, cg)
    if not fg:
        return True
    df = probe_differential(fcx, cf, r).value
    dg = probe_differential(fcx, cg, r).value
    dfg = probe_differential(fcx, fg, r)
    rhs = cochain_product(e0, df, cg) if df else Cochain.zero(fg.degree + 1)
    if dg:
        rhs = rhs + cochain_product(e0, cf, dg)
    diff = dfg.value + rhs
    if not diff:
        return True
    pr = _Prober(fcx)
    key = pr.slice_of(fg)
    q = pr.idx_of_value(dfg.target[1])
    vec = pr.vector(diff, dfg.target[0], key)
    return pr.is_zero_class(vec, fg.degree, key, q, r)


def _parse_monomial(registry: ClassRegistry, text: str) -> tuple[int, ...]:
    exps = [0] * len(registry.names)
    for part in text.split("*"):
        base, _, power = part.partition("^")
        k = int(power) if power else 1
        if base in registry.aliases:
            base, mult = registry.aliases[base]
            k *= mult
        exps[registry.names.index(base)] += k
    return tuple(exps)


# ---------------------------------------------------------- configurations

CONFIG_NAMES = ("abelianizing", "may", "may_ground", "ab_to_may")


@dataclass
class SpectralConfig:
    """A filtered algebra whose dual's cobar complex carries the filtration."""

    name: str
    algebra: StructuredBialgebra
    filtration: Filtration
    coefficients: str
    description: str

    @cached_property
    def coalgebra(self) -> StructuredBialgebra:
        return dualize(self.filtration.adapted_algebra)

    def filtered_complex(self, s_max: int, u_max: int | None = None) -> FilteredComplex:
        cx = cobar_complex(self.coalgebra, self.coefficients, s_max + 1, u_max=u_max, verify=False)
        return chain_filtration(cx, self.filtration, check=False)

    def pages(self, s_max: int, r_max: int | None = None, u_max: int | None = None, cache: RankCache | None = None, jobs: int = 1) -> SpectralPages:
        p = pages(self.filtered_complex(s_max, u_max), r_max, s_max, cache, jobs)
        p.meta["configuration"] = self.name
        return p

    def abutment(self, s_max: int, u_max: int | None = None, cache: RankCache | None = None, jobs: int = 1) -> DimTable:
        return cohh(self.coalgebra, self.coefficients, s_max, cache, jobs, u_max=u_max)

    def e0_complex(self, s_max: int, u_max: int | None = None) -> BigradedComplex:
        g = associated_graded(self.filtration.adapted_algebra, self.filtration, weight_name=f"_{self.filtration.name}_t")
        return cobar_complex(dualize(g.graded), self.coefficients, s_max + 1, u_max=u_max, verify=False)

    def e1_check(self, p: SpectralPages, cache: RankCache | None = None) -> CheckReport:
        return e1_check(p, self.filtration.adapted_algebra, self.filtration, cache)

    def registry(self, fcx: FilteredComplex) -> ClassRegistry:
        if self.coefficients != "self":
            raise ValueError("named classes are registered for self coefficients only")
        return ClassRegistry.steenrod(fcx, self.e0_complex(fcx.complex.n_max - 1, fcx.complex.u_max))


def configuration(name: str) -> SpectralConfig:
    """One of the four spectral sequences converging to invariants of A(1)."""
    a1 = builtin("a1")
    if name in ("abelianizing", "ab"):
        return SpectralConfig("abelianizing", a1, abelianizing_filtration(a1), "self",
                              "abelianizing filtration on the cyclic cobar complex of A(1)*")
    if name == "may":
        return SpectralConfig("may", a1, may_filtration(a1), "self",
                              "May filtration on the cyclic cobar complex of A(1)*")
    if name == "may_ground":
        return SpectralConfig("may_ground", a1, may_filtration(a1), "ground",
                              "May filtration on the classical cobar complex of A(1)*")
    if name == "ab_to_may":
        ab = abelianizing_filtration(a1)
        g = associated_graded(a1, may_filtration(a1), compatible_with=ab)
        return SpectralConfig("ab_to_may", g.graded, g.induced(ab, "ab"), "self",
                              "abelianizing filtration on the cyclic cobar complex of the May associated graded dual")
    raise KeyError(f"unknown spectral sequence {name!r}; choose from {CONFIG_NAMES}")
