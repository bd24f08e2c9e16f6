"""Run job specifications and render their results."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebras import finite_group
from .cache import RankCache
from .charts import emit_chart
from .dsl import JobSpec, load_algebra
from .filtrations import may_filtration
from .homology import DimTable, burghelea_check, cohh, ext_dims, hh
from .series import poincare_series
from .specseq import SpectralConfig, configuration, convergence_check

__all__ = ["JobResult", "run_job", "render_table"]


@dataclass
class JobResult:
    text: str
    ok: bool
    table: DimTable | None = None
    checks: dict = field(default_factory=dict)


def render_table(t: DimTable, fmt: str) -> str:
    if fmt == "json":
        return t.to_json() + "\n"
    if fmt == "svg":
        return emit_chart(t, "svg")
    lines = [f"# {t.meta.get('algebra', '')} {' '.join(t.names)}".rstrip()]
    lines.append("totals: " + ", ".join(f"{t.names[0]}={k}: {v}" for k, v in t.totals().items()))
    for k, v in t.items():
        if v:
            flag = "" if t.is_exact(k) else "  (truncated)"
            lines.append("  " + " ".join(f"{n}={x}" for n, x in zip(t.names, k)) + f"  dim={v}{flag}")
    return "\n".join(lines) + "\n"


def _ss_config(spec: JobSpec) -> SpectralConfig:
    if spec.algebra.strip() in ("builtin:a1", "a1"):
        if spec.filtration == "may" and spec.coefficients == "ground":
            return configuration("may_ground")
        if spec.coefficients == "ground":
            raise ValueError("ground coefficients are available with the may filtration only")
        return configuration(spec.filtration)
    if spec.filtration != "may":
        raise ValueError("only the may filtration is defined for algebras other than A(1)")
    a = load_algebra(spec.algebra)
    return SpectralConfig("may", a, may_filtration(a), spec.coefficients, "May filtration")


def _compare(t: DimTable, spec: JobSpec, checks: dict) -> None:
    if spec.reference:
        rep = poincare_series(t, spec.reference)
        checks[f"series:{spec.reference}"] = rep.ok


def run_job(spec: JobSpec, cache: RankCache | None = None, jobs: int = 1, page: int | None = None) -> JobResult:
    """Compute and render; ``ok`` is the conjunction of all reference comparisons."""
    checks: dict = {}
    if spec.kind in ("hh", "poincare") or (spec.kind == "chart" and spec.filtration is None and spec.coefficients == "self"):
        a = load_algebra(spec.algebra)
        t = hh(a, spec.n_max, cache, jobs, u_max=spec.u_max)
        if spec.kind == "poincare":
            rep = poincare_series(t, spec.reference)
            checks[f"series:{spec.reference}"] = rep.ok
            text = json.dumps(
                {"reference": rep.reference, "ok": rep.ok, "compared": rep.compared,
                 "first_mismatch": rep.first_mismatch, "degrees": list(rep.degrees)},
                sort_keys=True,
            ) + "\n"
            return JobResult(text, rep.ok, t, checks)
        _compare(t, spec, checks)
        out = emit_chart(t, spec.format) if spec.kind == "chart" else render_table(t, spec.format)
        return JobResult(out, all(checks.values()), t, checks)
    if spec.kind == "cohh" or (spec.kind == "chart" and spec.filtration is None):
        a = load_algebra(spec.algebra)
        t = cohh(a, spec.coefficients, spec.n_max, cache, jobs, u_max=spec.u_max)
        _compare(t, spec, checks)
        out = emit_chart(t, spec.format) if spec.kind == "chart" else render_table(t, spec.format)
        return JobResult(out, all(checks.values()), t, checks)
    if spec.kind == "ext":
        t = ext_dims(spec.n_max, spec.u_max or 6 * (spec.n_max + 1), cache, jobs)
        _compare(t, spec, checks)
        return JobResult(render_table(t, spec.format), all(checks.values()), t, checks)
    if spec.kind == "burghelea":
        rep = burghelea_check(finite_group(spec.group), spec.n_max, cache, jobs)
        checks["burghelea"] = rep.ok
        doc = {
            "group": spec.group,
            "hh": rep.hh,
            "centralizer_sum": rep.decomposition,
            "matches": rep.matches,
            "classes": [{"class": list(c), "centralizer_order": o, "homology": h} for c, o, h in rep.per_class],
        }
        if spec.format == "json":
            text = json.dumps(doc, sort_keys=True) + "\n"
        else:
            lines = [f"# Burghelea check for {spec.group}"]
            for n in sorted(rep.hh):
                lines.append(f"n={n}: HH={rep.hh[n]} centralizer sum={rep.decomposition[n]} {'ok' if rep.matches[n] else 'MISMATCH'}")
            for c, o, h in rep.per_class:
                lines.append(f"  class {{{', '.join(c)}}}: centralizer order {o}, H_n = {list(h.values())}")
            text = "\n".join(lines) + "\n"
        return JobResult(text, rep.ok, None, checks)
    if spec.kind in ("ss", "chart"):
        cfg = _ss_config(spec)
        p = cfg.pages(spec.n_max, spec.r_max, spec.u_max, cache, jobs)
        conv = convergence_check(p, cfg.abutment(spec.n_max, spec.u_max, cache, jobs))
        checks["page_advance"] = not p.advance_failures
        checks["convergence"] = conv.ok
        checks["stable"] = not p.infinity_failures
        r = p.r_max if page is None else page
        if spec.kind == "chart" or spec.format != "ascii":
            t = p.page(r)
            out = emit_chart(t, spec.format) if spec.format != "json" or spec.kind == "chart" else t.to_json() + "\n"
            return JobResult(out, all(checks.values()), t, checks)
        lines = [f"# spectral sequence: {cfg.description}", f"# degenerates from r = {p.degenerates_from()}, r_max = {p.r_max}"]
        shown = sorted({0, 1, 2, 3, p.r_max} & set(range(p.r_max + 1)))
        for rr in shown:
            tot = p.row_totals(rr)
            lines.append(f"E_{rr if rr < p.r_max else 'inf'}: " + ", ".join(f"{p.degree_name}={s}: {v}" for s, v in tot.items()))
        for rr, k, v in p.nonzero_differentials(2):
            lines.append(f"  d_{rr} out of (s,t,u)={k}: rank {v}")
        lines.append("checks: " + ", ".join(f"{k}={'pass' if v else 'FAIL'}" for k, v in checks.items()))
        return JobResult("\n".join(lines) + "\n", all(checks.values()), p.page(r), checks)
    raise ValueError(f"unsupported job kind {spec.kind!r}")
