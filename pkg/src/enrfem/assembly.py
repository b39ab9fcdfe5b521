"""Assembly and solution of the discrete interface problem.

The strong form on each layer is

    d/dx(-D u' + 2 delta u) + w u = f,

integrated by parts layer-wise against broken test functions q:

    int (D u' - 2 delta u) q' + int w u q
        + sum_{implicit interfaces} [u][q] / lambda  =  int f q,

with a natural zero-flux condition at a Neumann end and a Dirichlet lift
at a Dirichlet end.  The jump term comes from the implicit interface
condition [u] = lambda * (D u')(alpha-), whose left-hand flux equals
-[u]/lambda there.  Interface elements are integrated as two Gauss
sub-rules split at alpha.
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

import numpy as np
import scipy.linalg

from .enrichment import EnrichmentFunction, build_enrichment, gamma_from_lambda
from .femspace import EnrichedSpace, build_space, element_basis
from .mesh import Mesh1D

if TYPE_CHECKING:  # pragma: no cover
    from .analysis import ExactSolution

SOLVER_RESIDUAL_RTOL = 1e-10
SINGULAR_PIVOT_RTOL = 1e-14
_COEFF_SAMPLES = 33


@dataclass(frozen=True)
class BoundaryCondition:
    """Dirichlet(value) or Neumann(flux value; only zero flux is assembled)."""

    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann"):
            raise ValueError("boundary condition kind must be 'dirichlet' or 'neumann'")

    @staticmethod
    def dirichlet(value: float) -> "BoundaryCondition":
        return BoundaryCondition("dirichlet", float(value))

    @staticmethod
    def neumann(value: float = 0.0) -> "BoundaryCondition":
        return BoundaryCondition("neumann", float(value))


@dataclass(frozen=True)
class InterfaceSpec:
    """One interface point: continuous, or implicit with jump coefficient lam.

    ``gamma`` is the derived Robin parameter of the enrichment: zero for a
    continuous interface, -lam*D-*D+/(D+ - D-) for an implicit one.
    """

    alpha: float
    kind: str
    lam: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("continuous", "implicit"):
            raise ValueError("interface kind must be 'continuous' or 'implicit'")
        if self.kind == "continuous" and (self.lam != 0.0 or self.gamma != 0.0):
            raise ValueError("continuous interface requires lam = gamma = 0")
        if self.kind == "implicit" and not self.lam > 0:
            raise ValueError("implicit interface requires lam > 0 (coercivity)")

    @staticmethod
    def continuous(alpha: float) -> "InterfaceSpec":
        return InterfaceSpec(alpha=float(alpha), kind="continuous")

    @staticmethod
    def implicit(alpha: float, lam: float, d_minus: float, d_plus: float) -> "InterfaceSpec":
        gamma = gamma_from_lambda(lam, d_minus, d_plus)
        return InterfaceSpec(alpha=float(alpha), kind="implicit", lam=float(lam), gamma=gamma)


Coefficient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ProblemSpec:
    """Full BVP description with per-layer coefficients.

    Layers are the subintervals between consecutive interfaces (and the
    domain endpoints); every coefficient tuple has one evaluable entry per
    layer (numpy Polynomials, constants via ``lambda x: c``, or any
    array-aware callable).
    """

    domain: tuple[float, float]
    diffusivity: tuple[Coefficient, ...]
    conv_delta: tuple[Coefficient, ...]
    reaction: tuple[Coefficient, ...]
    source: tuple[Coefficient, ...]
    interfaces: tuple[InterfaceSpec, ...] = ()
    bc_left: BoundaryCondition = field(default_factory=lambda: BoundaryCondition.neumann())
    bc_right: BoundaryCondition = field(default_factory=lambda: BoundaryCondition.dirichlet(0.0))
    exact: "ExactSolution | None" = None

    def __post_init__(self):
        a, b = self.domain
        if not a < b:
            raise ValueError("domain requires a < b")
        alphas = [spec.alpha for spec in self.interfaces]
        if any(not a < al < b for al in alphas):
            raise ValueError("interfaces must lie strictly inside the domain")
        if any(x >= y for x, y in zip(alphas, alphas[1:])):
            raise ValueError("interfaces must be strictly increasing")
        n_layers = len(alphas) + 1
        for name in ("diffusivity", "conv_delta", "reaction", "source"):
            if len(getattr(self, name)) != n_layers:
                raise ValueError(f"{name} needs one entry per layer ({n_layers})")
        breaks = [a] + alphas + [b]
        for i in range(n_layers):
            xs = np.linspace(breaks[i], breaks[i + 1], _COEFF_SAMPLES + 2)[1:-1]
            if np.min(eval_coefficient(self.diffusivity[i], xs)) <= 0:
                raise ValueError(f"diffusivity must be positive on layer {i}")
            if np.min(eval_coefficient(self.reaction[i], xs)) < 0:
                raise ValueError(f"reaction coefficient must be nonnegative on layer {i}")

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(spec.alpha for spec in self.interfaces)

    def layer_of(self, x: float) -> int:
        """Layer index owning x (left layer exactly at an interface)."""
        return bisect.bisect_left(self.breakpoints, x)


def eval_coefficient(fn: Coefficient, xs: np.ndarray) -> np.ndarray:
    """Evaluate a layer coefficient at points, broadcasting scalar results."""
    out = np.asarray(fn(xs), dtype=float)
    if out.shape != np.shape(xs):
        out = np.broadcast_to(out, np.shape(xs)).copy()
    return out


@dataclass(frozen=True)
class AssembledSystem:
    """Free-DOF linear system with the Dirichlet lift folded into the rhs."""

    matrix: np.ndarray
    rhs: np.ndarray
    space: EnrichedSpace
    constrained_values: np.ndarray


def quadrature_rule(npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points/weights on [-1, 1]; exact to degree 2*npts - 1."""
    if not 1 <= npts <= 16:
        raise ValueError("quadrature size must be between 1 and 16")
    return np.polynomial.legendre.leggauss(npts)


def _interface_index(problem: ProblemSpec, alpha: float) -> int:
    """Position of an interface point in the problem's (sorted) list.

    Mesh hits carry indices in the order interfaces were handed to the
    mesh builder, which need not match the problem's sorted order, so the
    lookup goes through the coordinate.
    """
    j = problem.layer_of(alpha)
    if j >= len(problem.interfaces) or problem.interfaces[j].alpha != alpha:
        raise ValueError(f"mesh interface at {alpha} is not one of the problem's")
    return j


def enrichments_for_problem(problem: ProblemSpec, mesh: Mesh1D) -> list[EnrichmentFunction]:
    """One enrichment per interface hit, with gamma from the interface spec."""
    out = []
    for hit in mesh.interface_hits:
        xl, xr = mesh.element_bounds(hit.element)
        gamma = problem.interfaces[_interface_index(problem, hit.alpha)].gamma
        out.append(build_enrichment(xl, xr, hit.alpha, gamma, element=hit.element))
    return out


def space_for_problem(problem: ProblemSpec, mesh: Mesh1D, degree: int) -> EnrichedSpace:
    return build_space(
        mesh, degree, enrichments_for_problem(problem, mesh),
        problem.bc_left.kind, problem.bc_right.kind,
    )


def _element_pieces(problem: ProblemSpec, mesh: Mesh1D, k: int):
    """(xl, xr, layer, side) sub-intervals of element k, split at an interface."""
    xl, xr = mesh.element_bounds(k)
    for hit in mesh.interface_hits:
        if hit.element == k:
            j = _interface_index(problem, hit.alpha)
            return [(xl, hit.alpha, j, "left"), (hit.alpha, xr, j + 1, "right")]
    return [(xl, xr, problem.layer_of(0.5 * (xl + xr)), "left")]


def assemble_system(problem: ProblemSpec, space: EnrichedSpace, quad_npts: int = 6) -> AssembledSystem:
    """Assemble the free-DOF matrix and load vector on ``space``.

    A_ij = int (D u_j' - 2 delta u_j) u_i' + int w u_j u_i
           + sum_implicit [u_j][u_i]/lam,  b_i = int f u_i, followed by the
    Dirichlet lift.  Raises if the space's interfaces do not match the
    problem's, or if a Neumann end carries a nonzero flux value.
    """
    mesh = space.mesh
    hit_alphas = [hit.alpha for hit in mesh.interface_hits]
    if len(hit_alphas) != len(problem.interfaces) or not np.allclose(
        hit_alphas, [s.alpha for s in problem.interfaces], rtol=0, atol=0
    ):
        raise ValueError("space was not built from this problem's mesh and interfaces")
    for bc in (problem.bc_left, problem.bc_right):
        if bc.kind == "neumann" and bc.value != 0.0:
            raise ValueError("nonzero Neumann flux is not implemented")
    if quad_npts < space.degree + 3:
        warnings.warn(
            f"quadrature with {quad_npts} points may be too coarse for "
            f"degree {space.degree}; recommend at least {space.degree + 3}",
            stacklevel=2,
        )
    ref_x, ref_w = quadrature_rule(quad_npts)

    n = space.n_dofs
    A = np.zeros((n, n))
    b = np.zeros(n)

    for k in range(mesh.n_elements):
        for xl, xr, layer, side in _element_pieces(problem, mesh, k):
            half = 0.5 * (xr - xl)
            xs = xl + half * (ref_x + 1.0)
            wq = half * ref_w
            idx, vals, ders = element_basis(space, k, xs, side)

            d_c = eval_coefficient(problem.diffusivity[layer], xs)
            conv = eval_coefficient(problem.conv_delta[layer], xs)
            w_c = eval_coefficient(problem.reaction[layer], xs)
            f_c = eval_coefficient(problem.source[layer], xs)

            local = (ders * (wq * d_c)) @ ders.T
            if np.any(conv != 0.0):
                local += (ders * (wq * (-2.0) * conv)) @ vals.T
            if np.any(w_c != 0.0):
                local += (vals * (wq * w_c)) @ vals.T
            A[np.ix_(idx, idx)] += local
            b[idx] += (vals * (wq * f_c)).sum(axis=1)

    for hit in mesh.interface_hits:
        spec = problem.interfaces[_interface_index(problem, hit.alpha)]
        if spec.kind != "implicit":
            continue
        x = np.array([hit.alpha])
        idx, v_left, _ = element_basis(space, hit.element, x, "left")
        _, v_right, _ = element_basis(space, hit.element, x, "right")
        jump = v_right[:, 0] - v_left[:, 0]
        A[np.ix_(idx, idx)] += np.outer(jump, jump) / spec.lam

    free = space.free_index >= 0
    constrained_values = np.array(
        [
            (problem.bc_left if dof == 0 else problem.bc_right).value
            for dof in space.constrained
        ]
    )
    rhs = b[free]
    if len(space.constrained):
        rhs = rhs - A[np.ix_(free, ~free)] @ constrained_values
    return AssembledSystem(
        matrix=A[np.ix_(free, free)],
        rhs=rhs,
        space=space,
        constrained_values=constrained_values,
    )


def solve_system(system: AssembledSystem) -> np.ndarray:
    """Direct LU solve with partial pivoting and a residual check."""
    A, b = system.matrix, system.rhs
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(A)) if A.size else 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(pivots < SINGULAR_PIVOT_RTOL * max(scale, np.finfo(float).tiny))
    if bad.size:
        raise np.linalg.LinAlgError(
            f"numerically singular system: zero pivot at free DOF {int(bad[0])}"
        )
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    residual = np.linalg.norm(A @ x - b)
    bound = SOLVER_RESIDUAL_RTOL * (
        np.linalg.norm(A, "fro") * np.linalg.norm(x) + np.linalg.norm(b)
    )
    if residual > bound:
        raise ArithmeticError(
            f"solver residual {residual:.3e} exceeds tolerance {bound:.3e}"
        )
    return x


def condition_number(matrix: np.ndarray) -> float:
    """2-norm condition number from the full singular spectrum."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma[-1] == 0.0:
        return float("inf")
    return float(sigma[0] / sigma[-1])


def min_real_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest real part over the spectrum (coercivity diagnostic)."""
    return float(np.min(np.linalg.eigvals(matrix).real))
