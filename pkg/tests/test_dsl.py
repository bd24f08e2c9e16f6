from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hochschild import builtin, hh
from hochschild.dsl import (
    KINDS,
    AlgebraSpec,
    DSLError,
    JobSpec,
    algebra_from_json,
    algebra_to_json,
    load_algebra,
    parse_algebra,
    parse_spec,
)

EXTERIOR = """\
# k[x]/x^2 with x primitive
GENERATORS
  x: 1
BASIS
  1, x
MULT
  x * x = 0
COMULT
  x = x (x) 1 + 1 (x) x
"""

TRUNCATED = """\
GENERATORS
  x: 1
  y: 2
BASIS
  1, x, y, x.y
MULT
  x * y = x.y
  y * x = x.y
COMULT
  x = x (x) 1 + 1 (x) x
  y = y ⊗ 1 + x ⊗ x + 1 ⊗ y
  x.y = x.y (x) 1 + x (x) y + y (x) x + 1 (x) x.y
"""

BAD_GRADING = """\
GENERATORS
  x: 1
  y: 3
BASIS
  1, x, y
MULT
  x * x = y
"""


def test_builtin_reference():
    spec = parse_algebra("builtin:a1")
    assert spec.builtin == "a1"
    assert spec.build() is builtin("a1")
    assert load_algebra("builtin:a1") is builtin("a1")


def test_exterior_file_equals_builtin():
    a = parse_algebra(EXTERIOR).build()
    e = builtin("exterior1")
    assert a.names == e.names
    assert a.fingerprint == e.fingerprint


def test_truncated_file_equals_builtin():
    a = parse_algebra(TRUNCATED).build()
    assert a.fingerprint == builtin("truncpoly2").fingerprint
    assert hh(a, 2).totals() == {0: 4, 1: 8, 2: 12}


def test_grading_error_has_location():
    with pytest.raises(DSLError) as err:
        parse_algebra(BAD_GRADING).build()
    e = err.value
    assert e.kind == "grading"
    assert e.line == 7
    assert e.col is not None and e.col > 1
    assert "line 7" in str(e)


@pytest.mark.parametrize(
    "text, kind, line",
    [
        ("FOO\n", "section", 1),
        ("GENERATORS\n  x: 1\nBASIS\n  1, z\n", "name", 4),
        ("GENERATORS\n  x: 1\nBASIS\n  1, x\nCOMULT\n  1 = 1 (x) 1\n", None, None),
    ],
)
def test_parse_errors(text, kind, line):
    if kind is None:
        with pytest.raises(DSLError):
            parse_algebra(text).build()
        return
    with pytest.raises(DSLError) as err:
        parse_algebra(text)
    assert err.value.kind == kind
    assert err.value.line == line


def test_empty_description():
    with pytest.raises(DSLError):
        parse_algebra("# nothing\n\n")


@pytest.mark.parametrize("text", [EXTERIOR, TRUNCATED, "builtin:e0may\n"])
def test_algebra_roundtrip(text):
    spec = parse_algebra(text)
    again = parse_algebra(spec.serialize())
    assert again == spec
    assert again.build().fingerprint == spec.build().fingerprint


@pytest.mark.parametrize("name", ["a1", "e0ab_dual", "d8_group_algebra"])
def test_structure_json_roundtrip(name):
    a = builtin(name)
    b = algebra_from_json(algebra_to_json(a))
    assert b.names == a.names
    assert (b.mult is None) == (a.mult is None)
    if a.group is None:
        assert b.fingerprint == a.fingerprint


def test_load_algebra_from_files(tmp_path):
    p = tmp_path / "ext.alg"
    p.write_text(EXTERIOR)
    assert load_algebra(str(p)).fingerprint == builtin("exterior1").fingerprint
    q = tmp_path / "a1.json"
    q.write_text(algebra_to_json(builtin("a1")))
    assert load_algebra(str(q)).fingerprint == builtin("a1").fingerprint


def test_parse_spec_dispatch():
    assert isinstance(parse_spec(EXTERIOR), AlgebraSpec)
    job = parse_spec('{"kind": "hh", "n_max": 4}')
    assert isinstance(job, JobSpec) and job.n_max == 4


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="nope"),
        dict(kind="hh", n_max=-1),
        dict(kind="ss"),
        dict(kind="poincare"),
        dict(kind="burghelea"),
        dict(kind="hh", format="pdf"),
        dict(kind="hh", coefficients="left"),
    ],
)
def test_jobspec_validation(kwargs):
    with pytest.raises(ValueError):
        JobSpec(**kwargs)


def test_jobspec_rejects_unknown_fields():
    with pytest.raises(ValueError):
        JobSpec.from_json('{"kind": "hh", "colour": 1}')


job_specs = st.builds(
    JobSpec,
    kind=st.sampled_from([k for k in KINDS if k not in ("ss", "poincare", "burghelea")]),
    algebra=st.sampled_from(["builtin:a1", "builtin:exterior1", "a1_dual"]),
    n_max=st.integers(0, 8),
    u_max=st.none() | st.integers(1, 40),
    r_max=st.none() | st.integers(1, 20),
    coefficients=st.sampled_from(["self", "ground"]),
    format=st.sampled_from(["ascii", "json", "svg"]),
    reference=st.none() | st.sampled_from(["hh_a1", "one"]),
)


@settings(max_examples=60, deadline=None)
@given(job_specs)
def test_jobspec_roundtrip(spec):
    assert JobSpec.from_json(spec.to_json()) == spec
    assert parse_spec(spec.to_json()) == spec


words = st.sampled_from(["x", "y", "x.y"])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(words, words, st.lists(words, max_size=2, unique=True)), max_size=4, unique_by=lambda t: t[:2]))
def test_dsl_roundtrip_on_generated_text(mult):
    lines = ["GENERATORS", "  x: 1", "  y: 2", "BASIS", "  1, x, y, x.y", "MULT"]
    lines += [f"  {a} * {b} = {' + '.join(t) if t else '0'}" for a, b, t in mult]
    spec = parse_algebra("\n".join(lines) + "\n")
    assert parse_algebra(spec.serialize()) == spec
