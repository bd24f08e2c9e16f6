from __future__ import annotations

import json
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hochschild import DimTable, builtin, ext_dims, hh
from hochschild.charts import ChartError, chart_from_json, chart_points, emit_chart
from hochschild.series import REFERENCES, poincare_series, reference_series


def test_json_schema(cache):
    t = ext_dims(2, 6, cache)
    doc = json.loads(emit_chart(t, "json"))
    assert set(doc) == {"meta", "points"}
    assert doc["meta"]["schema"] == "hochschild-chart/1"
    assert doc["meta"]["lines"] == "not rendered"
    for p in doc["points"]:
        assert set(p) == {"s", "adams", "dim"}
    assert {(p["s"], p["adams"]) for p in doc["points"]} >= {(0, 0), (1, 0), (1, 1)}


def test_ascii_grid():
    t = DimTable(("s", "u"), {(0, 0): 1, (1, 2): 2})
    out = emit_chart(t, "ascii")
    rows = out.splitlines()
    assert rows[0].startswith("s=1")
    assert rows[0].split("|")[1].split() == [".", "2"]
    assert rows[1].split("|")[1].split() == ["1", "."]


def test_svg_counts_multiplicities():
    t = DimTable(("s", "u"), {(0, 0): 1, (2, 7): 2})
    root = ET.fromstring(emit_chart(t, "svg"))
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}circle")) == 2
    counts = [e.text for e in root.findall(f"{ns}text") if e.get("class") == "count"]
    assert counts == ["2"]


def test_single_graded_table_is_rejected():
    t = DimTable(("n",), {(0,): 1})
    for fmt in ("svg", "json", "ascii"):
        with pytest.raises(ChartError):
            emit_chart(t, fmt)


def test_unknown_format():
    with pytest.raises(ChartError):
        emit_chart(DimTable(("s", "u"), {}), "png")


def test_empty_table_gives_empty_document():
    t = DimTable(("s", "u"), {})
    assert emit_chart(t, "ascii") == ""
    assert json.loads(emit_chart(t, "json"))["points"] == []
    root = ET.fromstring(emit_chart(t, "svg"))
    assert len(list(root)) == 0


def test_points_sum_other_gradings():
    t = DimTable(("s", "t", "u"), {(1, 0, 3): 1, (1, 2, 3): 1, (0, 0, 0): 1})
    assert chart_points(t) == [{"s": 0, "adams": 0, "dim": 1}, {"s": 1, "adams": 2, "dim": 2}]


tables = st.dictionaries(
    st.tuples(st.integers(0, 6), st.integers(0, 30)).filter(lambda k: k[1] >= k[0]),
    st.integers(1, 5),
    max_size=20,
)


@settings(max_examples=80, deadline=None)
@given(tables)
def test_json_roundtrip(entries):
    t = DimTable(("s", "u"), entries)
    assert chart_from_json(emit_chart(t, "json")) == t


# ------------------------------------------------------------- series

def test_single_variable_reference_coefficients():
    ser, bigraded = reference_series("hh_a1", 8)
    assert not bigraded
    coeffs = {i: c for (i, _), c in ser.items()}
    assert [coeffs[i] for i in range(9)] == [5, 8, 9, 10, 13, 16, 17, 18, 21]


def test_single_variable_reference_agrees_with_closed_form():
    ser, _ = reference_series("hh_a1", 40)
    closed = {n: 2 * n + 5 if n % 2 == 0 else (2 * n + 6 if n % 4 == 1 else 2 * n + 4) for n in range(41)}
    assert {i: c for (i, _), c in ser.items()} == closed


def test_bigraded_reference_collapses_to_single():
    single, _ = reference_series("hh_a1", 10)
    double, bigraded = reference_series("hh_a1_bigraded", 10)
    assert bigraded
    rows: dict = {}
    for (i, _), c in double.items():
        rows[i] = rows.get(i, 0) + c
    assert rows == {i: c for (i, _), c in single.items()}


def test_constant_series():
    t = DimTable(("n",), {(0,): 1}, meta={"exact_rows": frozenset({0})})
    assert poincare_series(t, "one").ok


def test_unknown_reference():
    with pytest.raises(KeyError):
        reference_series("zeta", 3)


def test_mismatch_is_reported(cache):
    t = hh(builtin("exterior1"), 4, cache)
    assert poincare_series(t, "exterior1").ok
    rep = poincare_series(t, "truncpoly2")
    assert not rep.ok
    assert rep.first_mismatch == ((0, 0), 2, 4)


def test_reference_catalogue():
    assert {"hh_a1", "hh_a1_bigraded", "one", "exterior1", "truncpoly2"} <= set(REFERENCES)
