"""Hochschild homology, dual Hochschild cohomology and May-type spectral sequences over F2."""

from __future__ import annotations

from .algebras import (
    AlgebraError,
    FiniteGroup,
    StructuredBialgebra,
    builtin,
    conjugacy_data,
    dualize,
    finite_group,
    group_algebra,
    make_algebra,
    verify_dihedral_iso,
)
from .cache import RankCache
from .charts import emit_chart
from .complexes import FilteredComplex, bar_complex, chain_filtration, cobar_complex, cochain_product
from .dsl import JobSpec, parse_algebra, parse_spec
from .f2linalg import BitMatrix, Subspace, kernel_basis, rank, subquotient_dim
from .filtrations import Filtration, abelianizing_filtration, associated_graded, filtration_checks, ideal_span, may_filtration
from .homology import DimTable, burghelea_check, cohh, duality_check, ext_dims, group_homology, hh, homology_dims
from .series import poincare_series
from .specseq import configuration, convergence_check, e1_check, pages, probe_differential

__version__ = "0.1.0"
