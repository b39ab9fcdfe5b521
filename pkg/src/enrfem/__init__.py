"""Enriched unfitted finite elements for 1D elliptic interface problems.

Solves two-point boundary value problems whose solution jumps across
interior interface points, including implicit (Robin-type) jump
conditions of the form [u] = gamma * [u'].  Standard P1/P2 Lagrange
spaces are enriched with a compactly supported, piecewise-linear
function per interface whose slopes encode the jump parameter.
"""

from .mesh import Mesh1D, build_mesh, locate_element, mesh_from_nodes
from .enrichment import (
    EnrichmentFunction,
    build_enrichment,
    eval_enrichment,
    gamma_from_lambda,
)
from .femspace import EnrichedSpace, build_space, eval_basis, eval_function
from .assembly import (
    AssembledSystem,
    BoundaryCondition,
    InterfaceSpec,
    ProblemSpec,
    assemble_system,
    condition_number,
    enrichments_for_problem,
    min_real_eigenvalue,
    quadrature_rule,
    solve_system,
    space_for_problem,
)
from .analysis import (
    ErrorReport,
    ExactSolution,
    coefficient_contrast,
    compute_errors,
    interpolate_enriched,
    observed_orders,
)
from .bench import BenchmarkProblem, catalog_problem, manufactured_rhs
from .cli import ConvergenceTable, emit_report, run_convergence

__version__ = "0.1.0"
