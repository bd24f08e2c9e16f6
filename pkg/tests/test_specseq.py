from __future__ import annotations

import numpy as np
import pytest

from hochschild import (
    bar_complex,
    builtin,
    chain_filtration,
    cohh,
    may_filtration,
    pages,
    probe_differential,
)
from hochschild.complexes import FilteredComplex
from hochschild.f2linalg import BitMatrix, Subspace, kernel_basis
from hochschild.filtrations import Filtration
from hochschild.specseq import (
    CONFIG_NAMES,
    configuration,
    convergence_check,
    e1_check,
    leibniz_check,
)


# ------------------------------------------------------ subspace oracle

def _z(fcx, s, key, idx, r, p):
    """Z_r^p = {x in F_p : dx in F_{p+r}} by explicit kernels; Z_{-1} = F_p."""
    cx = fcx.complex
    n = len(idx)
    eye = np.eye(n, dtype=np.uint8)
    fp = eye[idx >= p]
    if r < 0 or not len(fp):
        return Subspace.span(n, fp)
    m = cx.target_degree(s)
    if not cx.has_degree(m) or key not in cx.slices(m):
        return Subspace.span(n, fp)
    d = cx.matrix(s, key).to_dense()
    tidx = _idx(fcx, m, key)
    low = d[tidx < p + r][:, idx >= p]
    if not low.shape[0]:
        return Subspace.span(n, fp)
    k = kernel_basis(BitMatrix.from_dense(low))
    if not k.dim:
        return Subspace.zero(n)
    return Subspace.span(n, (k.vectors().astype(np.int64) @ fp.astype(np.int64)) % 2)


def _idx(fcx, s, key):
    v = fcx.slice_values(s, key)
    return v if fcx.sense > 0 else fcx.max_value - v


def oracle_page(fcx, s, key, r):
    """dim E_r^p for every p: Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})."""
    cx = fcx.complex
    idx = _idx(fcx, s, key)
    n = len(idx)
    prev = cx.source_degree_into(s)
    has_prev = prev >= 0 and cx.has_degree(prev) and key in cx.slices(prev)
    if has_prev:
        pidx = _idx(fcx, prev, key)
        dprev = cx.matrix(prev, key).to_dense().astype(np.int64)
    out = {}
    for p in range(fcx.max_value + 1):
        z = _z(fcx, s, key, idx, r, p)
        if not z.dim:
            continue
        bnd = _z(fcx, s, key, idx, r - 1, p + 1)
        if has_prev:
            zp = _z(fcx, prev, key, pidx, r - 1, p - r + 1)
            if zp.dim:
                img = (dprev @ zp.vectors().astype(np.int64).T).T % 2
                bnd = bnd + Subspace.span(n, img)
        dim = z.dim - bnd.dim
        if dim:
            out[p] = dim
    return out


def _compare_with_oracle(fcx, p_obj, r_values):
    cx = fcx.complex
    checked = 0
    for s in p_obj.degrees:
        for key in cx.keys(s):
            u = cx.public_key(key)[0]
            for r in r_values:
                want = oracle_page(fcx, s, key, r)
                got = {}
                for (s2, t, u2), v in p_obj.page(r).entries.items():
                    if s2 == s and u2 == u:
                        got[p_obj.t_of(t) if p_obj.direction == "chain" else p_obj.top - t] = v
                assert got == want, (s, key, r)
                checked += 1
    return checked


def test_pages_match_subspace_oracle_cochain():
    cfg = configuration("may_ground")
    fcx = cfg.filtered_complex(2, u_max=9)
    p = pages(fcx, s_max=2)
    assert _compare_with_oracle(fcx, p, range(0, 5)) > 0


def test_pages_match_subspace_oracle_self_cochain():
    cfg = configuration("abelianizing")
    fcx = cfg.filtered_complex(1, u_max=8)
    p = pages(fcx, s_max=1)
    assert _compare_with_oracle(fcx, p, range(0, 6)) > 0


def test_pages_match_subspace_oracle_chain(a1):
    f = may_filtration(a1)
    cx = bar_complex(f.adapted_algebra, "self", 3, u_max=7, verify=False)
    fcx = chain_filtration(cx, f)
    p = pages(fcx, s_max=2)
    assert p.degree_name == "n"
    assert _compare_with_oracle(fcx, p, range(0, 5)) > 0


# -------------------------------------------------------- engine basics

def test_r_max_must_be_positive(ab_fcx):
    with pytest.raises(ValueError):
        pages(ab_fcx, r_max=0)


def test_page_zero_counts_chains():
    cfg = configuration("may_ground")
    fcx = cfg.filtered_complex(2)
    p = pages(fcx, s_max=2)
    cx = fcx.complex
    assert p.row_totals(0) == {s: sum(cx.slice_dim(s, k) for k in cx.keys(s)) for s in p.degrees}


def test_one_jump_filtration_converges_at_once():
    a = builtin("truncpoly2")
    flat = Filtration.from_values(a, np.zeros(4, np.int64), "flat")
    cx = bar_complex(a, "self", 4, verify=False)
    fcx = chain_filtration(cx, flat)
    p = pages(fcx, s_max=3)
    assert p.advance_failures == [] and p.infinity_failures == []
    ab = {(k[0], k[1]): v for k, v in p.page(1).project(("n", "u")).entries.items() if v}
    from hochschild import hh

    direct = hh(a, 3)
    assert ab == {k: v for k, v in direct.entries.items() if v}
    assert convergence_check(p, direct).ok
    assert e1_check(p, a, flat).ok


def test_may_sequence_of_exterior_algebra():
    e = builtin("exterior1")
    f = may_filtration(e)
    cx = bar_complex(e, "self", 5, verify=False)
    p = pages(chain_filtration(cx, f), s_max=4)
    assert p.row_totals(p.r_max) == {n: 2 for n in range(5)}
    assert p.degenerates_from() <= 1


def test_may_ground_sequence(may_ground_pages, cache):
    p = may_ground_pages
    assert p.row_totals(1) == {0: 1, 1: 2, 2: 3, 3: 4, 4: 5}
    assert p.row_totals(p.r_max) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 3}
    assert p.advance_failures == []
    assert convergence_check(p, configuration("may_ground").abutment(4, cache=cache)).ok


def test_may_sequence_on_a1(cache):
    cfg = configuration("may")
    p = cfg.pages(3, cache=cache)
    assert p.row_totals(1) == {0: 5, 1: 9, 2: 13, 3: 17}
    assert p.row_totals(p.r_max) == {0: 5, 1: 8, 2: 9, 3: 10}
    assert p.degenerates_from() == 2
    assert cfg.e1_check(p, cache).ok
    assert convergence_check(p, cfg.abutment(3, cache=cache)).ok


def test_e1_of_abelianizing_sequence(ab_pages, ab_config, cache):
    assert ab_config.e1_check(ab_pages, cache).ok


def test_bigraded_views(ab_pages):
    t = ab_pages.bigraded(3)
    assert t.names == ("s", "u")
    assert t.totals() == ab_pages.row_totals(3)


def test_unknown_configuration():
    assert set(CONFIG_NAMES) == {"abelianizing", "may", "may_ground", "ab_to_may"}
    with pytest.raises(KeyError):
        configuration("other")


# --------------------------------------------------------------- probes

def test_registered_tridegrees(ab_registry):
    assert ab_registry.generator_tridegrees() == {
        "x10": (0, 1, 1),
        "x20": (0, 4, 3),
        "h10": (1, 1, 1),
        "h11": (1, 2, 2),
        "h20": (1, 4, 3),
    }


def test_monomial_names(ab_registry):
    assert ab_registry.name_of((0, 0, 0, 0, 2)) == "b20"
    assert ab_registry.name_of((2, 0, 1, 0, 0)) == "x10^2*h10"
    assert ab_registry.name_of((0, 0, 0, 3, 0)) == "h11^3"


def test_probe_values_are_cochains(ab_fcx, ab_registry):
    res = probe_differential(ab_fcx, ab_registry.generators["h20"], 1, ab_registry)
    assert res.source == (1, 4, 3) and res.target == (2, 3, 3)
    cx = ab_fcx.complex
    assert res.value == cx.element(("1*", "Sq1*", "Sq2*"))
    assert res.matches("h10*h11")
    assert not res.matches("0")


def test_probe_of_x20_cochain(ab_fcx, ab_registry):
    res = probe_differential(ab_fcx, ab_registry.generators["x20"], 1, ab_registry)
    cx = ab_fcx.complex
    assert res.value == cx.element(("Sq1*", "Sq2*"), ("Sq2*", "Sq1*"))
    assert res.matches("x10^2*h10 + x10*h11")


def test_probe_rejects_non_surviving_class(ab_fcx, ab_registry):
    with pytest.raises(ValueError):
        probe_differential(ab_fcx, ab_registry.generators["h20"], 2, ab_registry)


def test_probe_without_registry_reports_raw(ab_fcx, ab_registry):
    res = probe_differential(ab_fcx, ab_registry.generators["x20"], 1)
    assert res.name == "raw"


@pytest.mark.parametrize(
    "f, g, r",
    [("x10", "h11", 1), ("x10", "h20", 1), ("x20", "h10", 1), ("h10", "h20", 1), ("h20", "h20", 1), ("x10", "x20", 1)],
)
def test_leibniz_on_registered_classes(ab_fcx, ab_registry, f, g, r):
    assert leibniz_check(ab_fcx, ab_registry, f, g, r)


def test_registry_needs_self_coefficients():
    cfg = configuration("may_ground")
    with pytest.raises(ValueError):
        cfg.registry(cfg.filtered_complex(2))
