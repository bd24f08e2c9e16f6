"""Text format for small algebras, structure-constant JSON, and job specifications.

Algebra files look like::

    # k[x]/x^2 with x primitive
    GENERATORS
      x: 1
    BASIS
      1, x
    MULT
      x * x = 0
    COMULT
      x = x (x) 1 + 1 (x) x

Basis words are products of generators written ``x.y^2``; ``1`` is the
empty word.  Products with the basis word ``1`` and the coproduct of ``1``
are implicit, every other unlisted product is zero, and with a COMULT
section every other basis element needs an explicit coproduct.  A whole
file may instead be ``builtin:<name>``.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .algebras import BUILTIN_NAMES, AlgebraError, StructuredBialgebra, builtin, make_algebra

__all__ = [
    "DSLError",
    "AlgebraSpec",
    "parse_algebra",
    "load_algebra",
    "algebra_to_json",
    "algebra_from_json",
    "JobSpec",
    "parse_spec",
    "KINDS",
]

SECTIONS = ("GENERATORS", "BASIS", "MULT", "COMULT")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TENSOR = re.compile(r"\s*(?:⊗|\(x\))\s*")


class DSLError(ValueError):
    """Parse or validation failure at a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None, kind: str = "syntax"):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind


@dataclass(frozen=True)
class AlgebraSpec:
    """Parsed algebra description; ``builtin`` set means everything else is empty."""

    generators: tuple[tuple[str, int], ...] = ()
    basis: tuple[str, ...] = ()
    mult: tuple[tuple[str, str, tuple[str, ...]], ...] | None = None
    comult: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] | None = None
    builtin: str | None = None
    locations: dict = field(default_factory=dict, compare=False, repr=False)

    def serialize(self) -> str:
        if self.builtin is not None:
            return f"builtin:{self.builtin}\n"
        out = ["GENERATORS"]
        out += [f"  {g}: {d}" for g, d in self.generators]
        out += ["BASIS", "  " + ", ".join(self.basis)]
        if self.mult is not None:
            out.append("MULT")
            out += [f"  {a} * {b} = {' + '.join(t) if t else '0'}" for a, b, t in self.mult]
        if self.comult is not None:
            out.append("COMULT")
            for c, terms in self.comult:
                rhs = " + ".join(f"{x} (x) {y}" for x, y in terms) if terms else "0"
                out.append(f"  {c} = {rhs}")
        return "\n".join(out) + "\n"

    def build(self, label: str = "") -> StructuredBialgebra:
        if self.builtin is not None:
            return builtin(self.builtin)
        return _build(self, label)


# ------------------------------------------------------------------ parsing

def _word_degree(word: str, gens: dict[str, int], line: int, col: int) -> int:
    if word == "1":
        return 0
    total = 0
    for factor in word.split("."):
        base, _, power = factor.partition("^")
        if not _NAME.fullmatch(base) or (power and not power.isdigit()):
            raise DSLError(f"malformed basis word {word!r}", line, col)
        if base not in gens:
            raise DSLError(f"undeclared name {base!r}", line, col + word.find(base), "name")
        total += gens[base] * (int(power) if power else 1)
    return total


def _items(text: str, start: int, sep: str):
    """Split ``text`` on ``sep`` yielding (stripped item, 0-based column)."""
    pos = 0
    for part in text.split(sep):
        stripped = part.strip()
        if stripped:
            yield stripped, start + pos + part.index(stripped)
        pos += len(part) + len(sep)


def parse_algebra(text: str) -> AlgebraSpec:
    """Parse the algebra format (or ``builtin:<name>``)."""
    lines = [(i + 1, raw.split("#", 1)[0].rstrip()) for i, raw in enumerate(text.splitlines())]
    lines = [(n, s) for n, s in lines if s.strip()]
    if not lines:
        raise DSLError("empty algebra description")
    first_no, first = lines[0]
    if first.strip().startswith("builtin:"):
        if len(lines) > 1:
            raise DSLError("nothing may follow a builtin reference", lines[1][0], 1)
        name = first.strip()[len("builtin:"):].strip()
        if name not in BUILTIN_NAMES:
            raise DSLError(f"unknown builtin {name!r}", first_no, first.index(name) + 1, "name")
        return AlgebraSpec(builtin=name)

    section = None
    seen = set()
    gens: dict[str, int] = {}
    gen_list: list[tuple[str, int]] = []
    basis: list[str] = []
    mult: dict[tuple[str, str], tuple[str, ...]] | None = None
    comult: dict[str, tuple[tuple[str, str], ...]] | None = None
    loc: dict = {}

    def need_basis(word, n, col):
        if word not in basis:
            raise DSLError(f"undeclared name {word!r}", n, col + 1, "name")

    for n, s in lines:
        head = s.strip()
        if re.fullmatch(r"[A-Z]+:?", head):
            head = head.rstrip(":")
            if head not in SECTIONS:
                raise DSLError(f"unknown section {head!r}", n, s.index(head) + 1, "section")
            if head in seen:
                raise DSLError(f"repeated section {head!r}", n, s.index(head) + 1, "section")
            seen.add(head)
            section = head
            if head == "MULT":
                mult = {}
                loc["MULT"] = n
            if head == "COMULT":
                comult = {}
                loc["COMULT"] = n
            continue
        if section is None:
            raise DSLError("content before the first section", n, 1)
        if section == "GENERATORS":
            for item, col in _items(s, 0, ","):
                name, colon, deg = item.partition(":")
                name, deg = name.strip(), deg.strip()
                if not colon or not _NAME.fullmatch(name) or not re.fullmatch(r"\d+", deg):
                    raise DSLError(f"expected 'name: degree', got {item!r}", n, col + 1)
                if name in gens:
                    raise DSLError(f"generator {name!r} declared twice", n, col + 1, "name")
                gens[name] = int(deg)
                gen_list.append((name, int(deg)))
        elif section == "BASIS":
            for item, col in _items(s.replace(",", " "), 0, " "):
                _word_degree(item, gens, n, col + 1)
                if item in basis:
                    raise DSLError(f"basis word {item!r} listed twice", n, col + 1, "shape")
                basis.append(item)
                loc[("basis", item)] = (n, col + 1)
        elif section == "MULT":
            lhs, eq, rhs = s.partition("=")
            if not eq or "*" not in lhs:
                raise DSLError("expected 'a * b = terms'", n, 1)
            a, _, b = lhs.partition("*")
            a_col = s.index(a.strip())
            b_col = lhs.index("*") + 1 + b.index(b.strip())
            a, b = a.strip(), b.strip()
            need_basis(a, n, a_col)
            need_basis(b, n, b_col)
            if (a, b) in mult:
                raise DSLError(f"product {a} * {b} given twice", n, a_col + 1)
            terms = []
            base = len(lhs) + 1
            for item, col in _items(rhs, base, "+"):
                if item == "0":
                    continue
                need_basis(item, n, col)
                terms.append(item)
                loc[("mult", a, b, item)] = (n, col + 1)
            mult[(a, b)] = tuple(terms)
            loc[("mult", a, b)] = (n, a_col + 1)
        elif section == "COMULT":
            lhs, eq, rhs = s.partition("=")
            if not eq:
                raise DSLError("expected 'c = a (x) b + ...'", n, 1)
            c = lhs.strip()
            c_col = s.index(c)
            need_basis(c, n, c_col)
            if c in comult:
                raise DSLError(f"coproduct of {c} given twice", n, c_col + 1)
            terms = []
            for item, col in _items(rhs, len(lhs) + 1, "+"):
                if item == "0":
                    continue
                parts = _TENSOR.split(item)
                if len(parts) != 2:
                    raise DSLError(f"expected 'a (x) b', got {item!r}", n, col + 1)
                x, y = parts
                need_basis(x, n, col)
                need_basis(y, n, col + item.rindex(y))
                terms.append((x, y))
                loc[("comult", c, x, y)] = (n, col + 1)
            comult[c] = tuple(terms)
            loc[("comult", c)] = (n, c_col + 1)
    for required in ("GENERATORS", "BASIS"):
        if required not in seen:
            raise DSLError(f"missing section {required}", lines[-1][0], 1, "section")
    if mult is None and comult is None:
        raise DSLError("need a MULT or a COMULT section", lines[-1][0], 1, "section")
    order = {w: i for i, w in enumerate(basis)}
    mult_t = None if mult is None else tuple((a, b, t) for (a, b), t in sorted(mult.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])))
    comult_t = None if comult is None else tuple((c, t) for c, t in sorted(comult.items(), key=lambda kv: order[kv[0]]))
    return AlgebraSpec(tuple(gen_list), tuple(basis), mult_t, comult_t, None, loc)


def _build(spec: AlgebraSpec, label: str) -> StructuredBialgebra:
    gens = dict(spec.generators)
    basis = list(spec.basis)
    n = len(basis)
    idx = {w: i for i, w in enumerate(basis)}
    degrees = [_word_degree(w, gens, 0, 0) for w in basis]
    loc = spec.locations
    mult = comult = None
    if spec.mult is not None:
        mult = np.zeros((n, n, n), np.uint8)
        given = set()
        for a, b, terms in spec.mult:
            given.add((a, b))
            for t in terms:
                mult[idx[a], idx[b], idx[t]] ^= 1
        if "1" in idx:
            one = idx["1"]
            for w in basis:
                if ("1", w) not in given:
                    mult[one, idx[w], idx[w]] = 1
                if (w, "1") not in given and w != "1":
                    mult[idx[w], one, idx[w]] = 1
    if spec.comult is not None:
        comult = np.zeros((n, n, n), np.uint8)
        given = {c for c, _ in spec.comult}
        for c, terms in spec.comult:
            for x, y in terms:
                comult[idx[c], idx[x], idx[y]] ^= 1
        for w in basis:
            if w not in given:
                if w == "1":
                    comult[idx[w], idx[w], idx[w]] = 1
                else:
                    line = loc.get("COMULT")
                    raise DSLError(f"missing coproduct of {w!r}", line, 1, "shape")
    try:
        return make_algebra(basis, degrees, mult, comult, label=label or "dsl")
    except AlgebraError as err:
        raise _locate(err, spec, basis) from err


def _locate(err: AlgebraError, spec: AlgebraSpec, basis: list[str]) -> DSLError:
    loc = spec.locations
    t = err.triple
    where = None
    if err.kind == "grading" and len(t) == 3:
        if str(err).startswith("grading: coproduct"):
            c, a, b = (basis[i] for i in t)
            where = loc.get(("comult", c, a, b)) or loc.get(("comult", c))
        else:
            a, b, c = (basis[i] for i in t)
            where = loc.get(("mult", a, b, c)) or loc.get(("mult", a, b))
    elif err.kind in ("associativity", "hopf", "unit") and len(t) >= 2:
        a, b = basis[t[0]], basis[t[1]]
        where = loc.get(("mult", a, b))
    elif err.kind in ("coassociativity", "counit") and t:
        where = loc.get(("comult", basis[t[0]]))
    line, col = where if where else (None, None)
    return DSLError(str(err).split(": ", 1)[-1], line, col, err.kind)


# --------------------------------------------------------- JSON structures

def algebra_to_json(a: StructuredBialgebra) -> str:
    """Structure constants as sparse index lists."""
    doc = {
        "names": list(a.names),
        "degrees": [int(d) for d in a.degrees],
        "mult": None if a.mult is None else np.argwhere(a.mult).tolist(),
        "comult": None if a.comult is None else np.argwhere(a.comult).tolist(),
        "weights": {k: [int(x) for x in v] for k, v in a.weights.items()},
        "label": a.label,
    }
    return json.dumps(doc, sort_keys=True)


def algebra_from_json(text: str) -> StructuredBialgebra:
    doc = json.loads(text)
    n = len(doc["names"])

    def tensor(entries):
        if entries is None:
            return None
        t = np.zeros((n, n, n), np.uint8)
        for i, j, k in entries:
            t[i, j, k] ^= 1
        return t

    return make_algebra(
        doc["names"], doc["degrees"], tensor(doc.get("mult")), tensor(doc.get("comult")),
        weights=doc.get("weights") or None, label=doc.get("label", ""),
    )


def load_algebra(source: str) -> StructuredBialgebra:
    """``builtin:<name>``, a bare builtin name, DSL text, or a path to a DSL or JSON file."""
    s = source.strip()
    if s in BUILTIN_NAMES:
        return builtin(s)
    if "\n" not in s and not s.startswith("builtin:") and Path(s).exists():
        text = Path(s).read_text()
        if text.lstrip().startswith("{"):
            return algebra_from_json(text)
        return parse_algebra(text).build(label=Path(s).stem)
    if s.startswith("{"):
        return algebra_from_json(s)
    return parse_algebra(s).build()


# ---------------------------------------------------------------- job specs

KINDS = ("hh", "cohh", "ext", "ss", "burghelea", "poincare", "chart")


@dataclass(frozen=True)
class JobSpec:
    """One requested computation."""

    kind: str
    algebra: str = "builtin:a1"
    n_max: int = 3
    u_max: int | None = None
    r_max: int | None = None
    filtration: str | None = None
    coefficients: str = "self"
    format: str = "ascii"
    reference: str | None = None
    group: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown computation kind {self.kind!r}")
        for name in ("n_max", "u_max", "r_max"):
            v = getattr(self, name)
            if v is not None and v < (0 if name == "n_max" else 1):
                raise ValueError(f"{name} must be positive")
        if self.coefficients not in ("self", "ground"):
            raise ValueError("coefficients must be self or ground")
        if self.format not in ("ascii", "json", "svg"):
            raise ValueError("format must be ascii, json or svg")
        if self.kind == "ss" and self.filtration not in ("may", "abelianizing", "ab_to_may"):
            raise ValueError("ss needs --filtration may|abelianizing")
        if self.kind == "poincare" and not self.reference:
            raise ValueError("poincare needs a reference series")
        if self.kind == "burghelea" and not self.group:
            raise ValueError("burghelea needs a group")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "JobSpec":
        doc = json.loads(text)
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown job fields {sorted(unknown)}")
        return cls(**doc)


def parse_spec(text: str) -> JobSpec | AlgebraSpec:
    """A JSON job specification or an algebra description."""
    if text.lstrip().startswith("{"):
        return JobSpec.from_json(text)
    return parse_algebra(text)
