"""Command line interface.  Exit status 0 iff every requested comparison passes."""

from __future__ import annotations

import sys

import click

from .algebras import GROUP_NAMES
from .cache import RankCache, default_cache, set_default_cache
from .dsl import DSLError, JobSpec
from .report import run_job
from .series import REFERENCES


def _common(f):
    opts = [
        click.option("--algebra", default="builtin:a1", show_default=True, help="builtin:<name>, a DSL file or a JSON structure file"),
        click.option("--coefficients", type=click.Choice(["self", "ground"]), default="self", show_default=True),
        click.option("--max-n", "max_n", type=click.IntRange(min=0), default=3, show_default=True, help="top homological degree"),
        click.option("--max-u", "max_u", type=click.IntRange(min=1), default=None, help="top internal degree (default: all)"),
        click.option("--format", "fmt", type=click.Choice(["ascii", "json", "svg"]), default="ascii", show_default=True),
        click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="persist rank results here"),
        click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="worker processes"),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _run(spec_kwargs: dict, cache_dir, jobs, page=None):
    try:
        spec = JobSpec(**spec_kwargs)
        cache = RankCache(cache_dir) if cache_dir else default_cache()
        set_default_cache(cache)
        res = run_job(spec, cache, jobs, page)
    except (DSLError, ValueError, KeyError) as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(2)
    click.echo(res.text, nl=False)
    if res.checks:
        failed = [k for k, v in res.checks.items() if not v]
        if failed:
            click.echo(f"comparison failed: {', '.join(failed)}", err=True)
    sys.exit(0 if res.ok else 1)


@click.group()
def main():
    """Hochschild homology and May-type spectral sequences over F2."""


@main.command()
@_common
@click.option("--reference", type=click.Choice(sorted(REFERENCES)), default=None, help="compare with a reference series")
def hh(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, reference):
    """Hochschild homology HH_n(A, A)."""
    _run(dict(kind="hh", algebra=algebra, n_max=max_n, u_max=max_u, format=fmt, reference=reference), cache_dir, jobs)


@main.command()
@_common
@click.option("--reference", type=click.Choice(sorted(REFERENCES)), default=None)
def cohh(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, reference):
    """Cohomology of the cyclic (self) or classical (ground) cobar complex of a coalgebra."""
    _run(dict(kind="cohh", algebra=algebra, coefficients=coefficients, n_max=max_n, u_max=max_u, format=fmt, reference=reference), cache_dir, jobs)


@main.command()
@_common
def ext(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs):
    """Ext over A(1) of F2, via the classical cobar complex of A(1)*."""
    _run(dict(kind="ext", n_max=max_n, u_max=max_u, format=fmt, coefficients="ground"), cache_dir, jobs)


@main.command()
@_common
@click.option("--filtration", type=click.Choice(["may", "abelianizing", "ab_to_may"]), required=True)
@click.option("--max-r", "max_r", type=click.IntRange(min=1), default=None, help="last page (default: E_infinity)")
@click.option("--page", type=click.IntRange(min=0), default=None, help="page to emit with --format json|svg")
def ss(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, filtration, max_r, page):
    """Spectral sequence of a filtered cobar complex, with convergence checks."""
    _run(dict(kind="ss", algebra=algebra, coefficients=coefficients, n_max=max_n, u_max=max_u, r_max=max_r,
              filtration=filtration, format=fmt), cache_dir, jobs, page)


@main.command()
@_common
@click.option("--group", type=click.Choice(GROUP_NAMES), default="D8", show_default=True)
def burghelea(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, group):
    """Compare HH of a group algebra with the sum of centralizer homologies."""
    _run(dict(kind="burghelea", group=group, n_max=max_n, format=fmt), cache_dir, jobs)


@main.command()
@_common
@click.option("--reference", type=click.Choice(sorted(REFERENCES)), required=True)
def poincare(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, reference):
    """Compare HH of an algebra with a reference Poincare series."""
    _run(dict(kind="poincare", algebra=algebra, n_max=max_n, u_max=max_u, reference=reference, format=fmt), cache_dir, jobs)


@main.command()
@_common
@click.option("--filtration", type=click.Choice(["may", "abelianizing", "ab_to_may"]), default=None,
              help="chart a spectral sequence page instead of HH")
@click.option("--max-r", "max_r", type=click.IntRange(min=1), default=None)
@click.option("--page", type=click.IntRange(min=0), default=None)
def chart(algebra, coefficients, max_n, max_u, fmt, cache_dir, jobs, filtration, max_r, page):
    """Chart (homological degree against u - s) of HH, coHH or a spectral sequence page."""
    _run(dict(kind="chart", algebra=algebra, coefficients=coefficients, n_max=max_n, u_max=max_u, r_max=max_r,
              filtration=filtration, format=fmt), cache_dir, jobs, page)


if __name__ == "__main__":
    main()
