"""Homology dimension tables of sliced complexes and the derived computations."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebras import (
    FiniteGroup,
    StructuredBialgebra,
    builtin,
    conjugacy_data,
    dualize,
    group_algebra,
)
from .cache import RankCache, default_cache
from .complexes import BigradedComplex, bar_complex, cobar_complex
from .f2linalg import Subspace

__all__ = [
    "DimTable",
    "slice_ranks",
    "homology_dims",
    "hh",
    "cohh",
    "ext_dims",
    "group_homology",
    "BurgheleaReport",
    "burghelea_check",
    "DualityReport",
    "duality_check",
    "commutator_quotient_dim",
    "euler_characteristics",
]


@dataclass(frozen=True)
class DimTable:
    """Map from degree tuples to dimensions, with per-entry exactness flags."""

    names: tuple[str, ...]
    entries: dict
    exact: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def get(self, key, default: int = 0) -> int:
        return self.entries.get(tuple(key), default)

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def is_exact(self, key) -> bool:
        return self.exact.get(tuple(key), True)

    def keys(self):
        return sorted(self.entries)

    def items(self):
        return sorted(self.entries.items())

    def nonzero(self) -> dict:
        return {k: v for k, v in self.entries.items() if v}

    def project(self, names) -> "DimTable":
        """Sum over the coordinates not in ``names``."""
        names = tuple(names)
        idx = [self.names.index(x) for x in names]
        entries: dict = {}
        exact: dict = {}
        for k, v in self.entries.items():
            nk = tuple(k[i] for i in idx)
            entries[nk] = entries.get(nk, 0) + v
            exact[nk] = exact.get(nk, True) and self.is_exact(k)
        return DimTable(names, entries, exact, dict(self.meta))

    def totals(self, name: str | None = None) -> dict[int, int]:
        """Row sums keyed by the first (or named) coordinate."""
        t = self.project((name or self.names[0],))
        return {k[0]: v for k, v in sorted(t.entries.items())}

    def row_exact(self, value: int, name: str | None = None) -> bool:
        i = self.names.index(name or self.names[0])
        rows = self.meta.get("exact_rows")
        if rows is not None and i == 0:
            return value in rows
        return all(self.is_exact(k) for k in self.entries if k[i] == value)

    def restrict(self, pred) -> "DimTable":
        keep = {k: v for k, v in self.entries.items() if pred(k)}
        return DimTable(self.names, keep, {k: self.is_exact(k) for k in keep}, dict(self.meta))

    def __eq__(self, other) -> bool:
        return isinstance(other, DimTable) and self.names == other.names and self.nonzero() == other.nonzero()

    def to_json(self) -> str:
        doc = {
            "names": list(self.names),
            "entries": [[list(k), v, self.is_exact(k)] for k, v in self.items()],
            "meta": self.meta,
        }
        return json.dumps(doc, sort_keys=True, default=_jsonable)

    @classmethod
    def from_json(cls, text: str) -> "DimTable":
        doc = json.loads(text)
        entries = {tuple(k): int(v) for k, v, _ in doc["entries"]}
        exact = {tuple(k): bool(e) for k, _, e in doc["entries"]}
        meta = doc.get("meta", {})
        if "exact_rows" in meta:
            meta["exact_rows"] = frozenset(meta["exact_rows"])
        return cls(tuple(doc["names"]), entries, exact, meta)

    def __repr__(self) -> str:
        return f"DimTable({self.names}, totals={self.totals() if self.entries else {}})"


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, np.integer):
        return int(x)
    return str(x)


# ------------------------------------------------------------------ ranks

_WORKER_COMPLEXES: dict = {}


def _rank_key(cx: BigradedComplex, n: int, key: tuple, tag: str = "rank") -> list:
    return [cx.algebra.fingerprint, cx.direction, cx.coeff, n, list(key), tag]


def _worker_rank(args) -> int:
    alg, direction, coeff, n_max, u_max, n, key = args
    ck = (alg.fingerprint, direction, coeff, n_max, u_max)
    cx = _WORKER_COMPLEXES.get(ck)
    if cx is None:
        cx = BigradedComplex(alg, direction, coeff, n_max, u_max, verify=False)
        _WORKER_COMPLEXES.clear()
        _WORKER_COMPLEXES[ck] = cx
    return cx.differential(n, key).rank()


def slice_ranks(
    cx: BigradedComplex,
    todo: list[tuple[int, tuple]],
    cache: RankCache | None = None,
    jobs: int = 1,
) -> dict[tuple[int, tuple], int]:
    """Rank of the differential out of each requested slice (memoized)."""
    cache = default_cache() if cache is None else cache
    out: dict = {}
    missing = []
    for n, key in todo:
        hit = cache.get(_rank_key(cx, n, key))
        if hit is None:
            missing.append((n, key))
        else:
            out[(n, key)] = int(hit)
    if jobs > 1 and len(missing) > 1:
        args = [(cx.algebra, cx.direction, cx.coeff, cx.n_max, cx.u_max, n, key) for n, key in missing]
        # largest slices first for load balance; results are keyed, so order is irrelevant
        order = sorted(range(len(args)), key=lambda i: -cx.slice_dim(*missing[i]))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker_rank, [args[i] for i in order]))
        computed = {missing[i]: r for i, r in zip(order, results)}
    else:
        computed = {nk: cx.differential(*nk).rank() for nk in missing}
    for nk, r in computed.items():
        cache.put(_rank_key(cx, *nk), int(r))
        out[nk] = int(r)
    return out


def homology_dims(
    cx: BigradedComplex,
    n_range=None,
    cache: RankCache | None = None,
    jobs: int = 1,
) -> DimTable:
    """dim ker - dim im for every slice with degree in ``n_range``.

    Entries whose incoming or outgoing map leaves the built range are
    flagged inexact.  Conjugacy-class sectors are summed out.
    """
    ns = range(cx.n_max + 1) if n_range is None else n_range
    todo = set()
    for n in ns:
        for key in cx.keys(n):
            for m in (n, cx.source_degree_into(n)):
                if cx.has_degree(m) and cx.has_degree(cx.target_degree(m)) and key in cx.slices(m):
                    todo.add((m, key))
    ranks = slice_ranks(cx, sorted(todo), cache, jobs)
    entries: dict = {}
    exact: dict = {}
    exact_rows = set()
    for n in ns:
        out_ok = cx.target_degree(n) < 0 or cx.has_degree(cx.target_degree(n))
        src = cx.source_degree_into(n)
        in_ok = src < 0 or cx.has_degree(src)
        if out_ok and in_ok:
            exact_rows.add(n)
        for key in cx.keys(n):
            dim = cx.slice_dim(n, key) - ranks.get((n, key), 0) - ranks.get((src, key), 0)
            pk = (n,) + cx.public_key(key)
            entries[pk] = entries.get(pk, 0) + dim
            exact[pk] = out_ok and in_ok
    meta = {
        "algebra": cx.algebra.label,
        "fingerprint": cx.algebra.fingerprint,
        "direction": cx.direction,
        "coefficients": cx.coeff,
        "n_max": max(ns) if len(ns) else -1,
        "u_max": cx.u_max,
        "exact_rows": frozenset(exact_rows),
    }
    return DimTable((cx.degree_name,) + cx.grading_names, entries, exact, meta)


def _trim(t: DimTable, n_max: int) -> DimTable:
    return t.restrict(lambda k: k[0] <= n_max)


def hh(a: StructuredBialgebra, n_max: int, cache: RankCache | None = None, jobs: int = 1, u_max: int | None = None) -> DimTable:
    """Hochschild homology HH_n(A, A), n <= n_max; internal degrees <= u_max (default all)."""
    cx = bar_complex(a, "self", n_max + 1, u_max=u_max, verify=False)
    return _trim(homology_dims(cx, range(n_max + 1), cache, jobs), n_max)


def cohh(c: StructuredBialgebra, coeff: str = "self", n_max: int = 3, cache: RankCache | None = None, jobs: int = 1, u_max: int | None = None) -> DimTable:
    """Cohomology of the cyclic (self) or classical (ground) cobar complex."""
    cx = cobar_complex(c, coeff, n_max + 1, u_max=u_max, verify=False)
    return _trim(homology_dims(cx, range(n_max + 1), cache, jobs), n_max)


def ext_dims(s_max: int, u_max: int, cache: RankCache | None = None, jobs: int = 1) -> DimTable:
    """Ext over A(1) of F2, via the classical cobar complex of A(1)*, keyed (s, u)."""
    return cohh(builtin("a1_dual"), "ground", s_max, cache, jobs, u_max=u_max)


def group_homology(g: FiniteGroup, n_max: int, cache: RankCache | None = None, jobs: int = 1) -> dict[int, int]:
    """dim H_n(G; F2) for n <= n_max, from the ground-coefficient bar complex."""
    cx = bar_complex(group_algebra(g), "ground", n_max + 1, verify=False)
    return _trim(homology_dims(cx, range(n_max + 1), cache, jobs), n_max).totals()


@dataclass(frozen=True)
class BurgheleaReport:
    hh: dict[int, int]
    decomposition: dict[int, int]
    per_class: list
    matches: dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.matches.values())


def burghelea_check(g: FiniteGroup, n_max: int, cache: RankCache | None = None, jobs: int = 1) -> BurgheleaReport:
    """Compare HH_n(F2[G]) with the sum over classes of H_n(centralizer)."""
    direct = hh(group_algebra(g), n_max, cache, jobs).totals()
    per_class = []
    total = {n: 0 for n in range(n_max + 1)}
    for cc in conjugacy_data(g):
        h = group_homology(cc.centralizer, n_max, cache, jobs)
        per_class.append((tuple(g.names[i] for i in cc.elements), cc.centralizer.order, h))
        for n in total:
            total[n] += h.get(n, 0)
    matches = {n: direct.get(n, 0) == total[n] for n in total}
    return BurgheleaReport(direct, total, per_class, matches)


@dataclass(frozen=True)
class DualityReport:
    homology: DimTable
    cohomology: DimTable
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches


def duality_check(a: StructuredBialgebra, n_max: int, cache: RankCache | None = None, jobs: int = 1) -> DualityReport:
    """Per-slice comparison of HH(A) with the cyclic cobar cohomology of A*."""
    h = hh(a, n_max, cache, jobs)
    c = cohh(dualize(a), "self", n_max, cache, jobs)
    keys = set(h.entries) | set(c.entries)
    bad = sorted(k for k in keys if h.get(k) != c.get(k))
    return DualityReport(h, c, bad)


def commutator_quotient_dim(a: StructuredBialgebra) -> int:
    """dim A / [A, A], computed from the span of all ab - ba."""
    m = a.mult.astype(np.int64)
    comm = (m ^ m.transpose(1, 0, 2)).reshape(-1, a.dim)
    return a.dim - Subspace.span(a.dim, comm).dim


def euler_characteristics(cx: BigradedComplex, table: DimTable) -> dict:
    """Per-key alternating sums of chain dims and homology dims over all degrees.

    Only meaningful when every degree of ``table`` is exact and the complex
    is treated as ending at its top degree.
    """
    chains: dict = {}
    homs: dict = {}
    for n in range(cx.n_max + 1):
        for key in cx.keys(n):
            pk = cx.public_key(key)
            chains[pk] = chains.get(pk, 0) + (-1) ** n * cx.slice_dim(n, key)
    for k, v in table.entries.items():
        homs[k[1:]] = homs.get(k[1:], 0) + (-1) ** k[0] * v
    return {"chains": chains, "homology": homs}
