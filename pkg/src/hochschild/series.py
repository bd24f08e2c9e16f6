"""Reference Poincaré series, expanded exactly with integer arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

from .homology import DimTable

__all__ = ["Series", "REFERENCES", "reference_series", "SeriesReport", "poincare_series"]

# A series is a dict {(i, j): coefficient} in s^i u^j, truncated at s-degree <= bound.
Series = dict


def _poly(*terms) -> Series:
    out: Series = {}
    for c, i, j in terms:
        out[(i, j)] = out.get((i, j), 0) + c
    return out


def _add(*ps: Series) -> Series:
    out: Series = {}
    for p in ps:
        for k, v in p.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _mul(p: Series, q: Series, bound: int) -> Series:
    out: Series = {}
    for (i, j), a in p.items():
        for (k, l), b in q.items():
            if i + k <= bound:
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + a * b
    return {k: v for k, v in out.items() if v}


def _geometric(i: int, j: int, bound: int) -> Series:
    """1 / (1 - s^i u^j) truncated at s-degree bound (i >= 1)."""
    return {(i * k, j * k): 1 for k in range(bound // i + 1)}


def _hh_a1_single(bound: int) -> Series:
    head = _poly((5, 0, 0), (8, 1, 0), (9, 2, 0), (10, 3, 0))
    tail = _mul(_poly((8, 4, 0)), _geometric(1, 0, bound), bound)
    return _mul(_add(head, tail), _geometric(4, 0, bound), bound)


def _hh_a1_bigraded(bound: int) -> Series:
    inner = _add(
        _poly((1, 0, 0), (1, 0, 2)),
        _mul(_poly((1, 1, 1)), _poly((1, 0, 0), (1, 0, 2), (1, 0, 5)), bound),
        _mul(_poly((1, 2, 2)), _poly((1, 0, 0), (2, 0, 5), (1, 0, 7)), bound),
        _mul(_poly((1, 3, 3)), _poly((1, 0, 0), (1, 0, 4), (1, 0, 5), (1, 0, 6), (1, 0, 9)), bound),
        _mul(
            _mul(_poly((1, 4, 4)), _poly((1, 0, 0), (1, 0, 4), (1, 0, 5), (1, 0, 9)), bound),
            _geometric(1, 1, bound),
            bound,
        ),
    )
    outer = _add(_mul(_poly((1, 0, 0), (1, 0, 1)), inner, bound), _poly((1, 0, 6), (1, 1, 2), (1, 1, 8), (1, 2, 4)))
    return _mul(outer, _geometric(4, 12, bound), bound)


def _one(bound: int) -> Series:
    return {(0, 0): 1}


def _exterior1(bound: int) -> Series:
    return _mul(_poly((2, 0, 0)), _geometric(1, 0, bound), bound)


def _truncpoly2(bound: int) -> Series:
    g = _geometric(1, 0, bound)
    return _mul(_poly((4, 0, 0)), _mul(g, g, bound), bound)


REFERENCES = {
    "hh_a1": (_hh_a1_single, False, "(5 + 8s + 9s^2 + 10s^3 + 8s^4/(1-s)) / (1-s^4)"),
    "hh_a1_bigraded": (_hh_a1_bigraded, True, "two-variable series of HH_{s,u}(A(1))"),
    "one": (_one, False, "1"),
    "exterior1": (_exterior1, False, "2 / (1-s)"),
    "truncpoly2": (_truncpoly2, False, "4 / (1-s)^2"),
}


def reference_series(name: str, bound: int) -> tuple[Series, bool]:
    """Coefficients of a named reference up to s-degree ``bound`` and whether it is bigraded."""
    if name not in REFERENCES:
        raise KeyError(f"unknown reference series {name!r}; choose from {sorted(REFERENCES)}")
    fn, bigraded, _ = REFERENCES[name]
    return fn(bound), bigraded


@dataclass(frozen=True)
class SeriesReport:
    reference: str
    ok: bool
    compared: int
    first_mismatch: tuple | None
    degrees: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def poincare_series(t: DimTable, reference: str) -> SeriesReport:
    """Compare the exact rows of a table coefficientwise with a reference series."""
    rows = t.meta.get("exact_rows")
    degs = sorted({k[0] for k in t.entries} | set(rows or ()))
    if rows is not None:
        degs = [n for n in degs if n in rows]
    if not degs:
        return SeriesReport(reference, True, 0, None, ())
    ser, bigraded = reference_series(reference, max(degs))
    if bigraded:
        if "u" not in t.names:
            raise ValueError("a bigraded reference needs a table with a u coordinate")
        got = {k: v for k, v in t.project((t.names[0], "u")).entries.items() if v}
        want = ser
    else:
        got = {(k, 0): v for k, v in t.totals().items() if v}
        want = {(i, 0): c for (i, _), c in _collapse(ser).items()}
    keys = sorted(k for k in set(got) | set(want) if k[0] in degs)
    bad = [(k, got.get(k, 0), want.get(k, 0)) for k in keys if got.get(k, 0) != want.get(k, 0)]
    return SeriesReport(reference, not bad, len(keys), bad[0] if bad else None, tuple(degs))


def _collapse(ser: Series) -> Series:
    out: Series = {}
    for (i, _), c in ser.items():
        out[(i, 0)] = out.get((i, 0), 0) + c
    return out
