"""Error measurement and the optimal-order interpolation oracle.

Errors are measured branch-wise: the L2 and broken-H1 norms integrate
each element (split at interfaces) against the exact branch owning that
sub-interval, and the nodal error is the maximum over interior mesh
nodes.  The interpolation operator assigns exact nodal values to the
standard DOFs and, per interface, enrichment coefficients built from the
extended branch derivative difference plus a jump correction
delta = -[u]_alpha / (alpha - x_{k+1}).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .assembly import ProblemSpec, eval_coefficient, quadrature_rule
from .femspace import EnrichedSpace, element_basis, full_coefficients

_CONTRAST_SAMPLES = 101


@dataclass(frozen=True)
class ExactSolution:
    """Piecewise exact solution with globally evaluable branch extensions.

    ``branches[i]`` is a (value, derivative) pair of callables owning the
    i-th layer; each must be evaluable on the whole domain (polynomial
    branches act as their own extensions).
    """

    branches: tuple[tuple[Callable, Callable], ...]
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        if len(self.branches) != len(self.breakpoints) + 1:
            raise ValueError("need one branch per layer (breakpoints + 1)")
        if any(x >= y for x, y in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @staticmethod
    def from_polynomials(polys: Sequence, breakpoints) -> "ExactSolution":
        """Branches from numpy Polynomials (derivatives taken symbolically)."""
        branches = tuple((p, p.deriv()) for p in polys)
        return ExactSolution(branches=branches, breakpoints=tuple(float(x) for x in breakpoints))

    def branch_of(self, x: float) -> int:
        """Index of the branch owning x (left branch exactly at a breakpoint)."""
        return bisect.bisect_left(self.breakpoints, x)

    def value(self, x: float) -> float:
        v, _ = self.branches[self.branch_of(x)]
        return float(v(x))

    def jump(self, interface: int) -> float:
        alpha = self.breakpoints[interface]
        vl, _ = self.branches[interface]
        vr, _ = self.branches[interface + 1]
        return float(vr(alpha)) - float(vl(alpha))


@dataclass(frozen=True)
class ErrorReport:
    """L2, broken-H1 seminorm, and interior nodal errors for one run."""

    l2: float
    h1_broken: float
    nodal_max: float
    cond: float | None = None

    def __post_init__(self):
        if self.l2 < 0 or self.h1_broken < 0 or self.nodal_max < 0:
            raise ValueError("error measures must be nonnegative")


def interpolate_enriched(exact: ExactSolution, space: EnrichedSpace) -> np.ndarray:
    """Free-DOF coefficients of the enriched interpolant of ``exact``.

    Defined for degree-1 spaces only.  Standard DOFs receive nodal values
    of the owning branch; the two enrichment DOFs of interface j receive
    (d2 - d1)(x_k) + delta and (d2 - d1)(x_{k+1}) + delta, where d1, d2
    are the extended branch derivatives and delta kills the solution jump.
    """
    if space.degree != 1:
        raise ValueError("the interpolation operator is defined for degree 1 only")

    full = np.zeros(space.n_dofs)
    for i, x in enumerate(space.std_nodes):
        value, _ = exact.branches[exact.branch_of(float(x))]
        full[i] = float(value(float(x)))

    for pos, psi in enumerate(space.enrichments):
        j = exact.branch_of(psi.alpha)  # left branch index at alpha
        _, d_left = exact.branches[j]
        _, d_right = exact.branches[j + 1]
        delta = -exact.jump(j) / (psi.alpha - psi.x_right)
        base = space.n_std + 2 * pos
        full[base] = float(d_right(psi.x_left)) - float(d_left(psi.x_left)) + delta
        full[base + 1] = float(d_right(psi.x_right)) - float(d_left(psi.x_right)) + delta

    free = space.free_index >= 0
    return full[free]


def _piece_branches(exact: ExactSolution, space: EnrichedSpace, k: int):
    """(xl, xr, branch, side) sub-intervals of element k for error integration."""
    xl, xr = space.mesh.element_bounds(k)
    psi = space.enrichment_on(k)
    if psi is not None:
        j = exact.branch_of(psi.alpha)
        return [(xl, psi.alpha, j, "left"), (psi.alpha, xr, j + 1, "right")]
    return [(xl, xr, exact.branch_of(0.5 * (xl + xr)), "left")]


def compute_errors(
    exact: ExactSolution,
    space: EnrichedSpace,
    coeffs,
    quad_npts: int = 12,
    constrained_values=None,
) -> ErrorReport:
    """L2 / broken-H1 / nodal errors of the discrete function vs ``exact``."""
    full = full_coefficients(space, coeffs, constrained_values)
    ref_x, ref_w = quadrature_rule(quad_npts)

    l2_sq = 0.0
    h1_sq = 0.0
    for k in range(space.mesh.n_elements):
        for xl, xr, branch, side in _piece_branches(exact, space, k):
            half = 0.5 * (xr - xl)
            xs = xl + half * (ref_x + 1.0)
            wq = half * ref_w
            idx, vals, ders = element_basis(space, k, xs, side)
            uh = full[idx] @ vals
            duh = full[idx] @ ders
            value, deriv = exact.branches[branch]
            e = eval_coefficient(value, xs) - uh
            de = eval_coefficient(deriv, xs) - duh
            l2_sq += float(wq @ (e * e))
            h1_sq += float(wq @ (de * de))

    nodal = 0.0
    for i in range(1, space.mesh.n_elements):
        x = float(space.mesh.nodes[i])
        value, _ = exact.branches[exact.branch_of(x)]
        idx, vals, _ = element_basis(space, i - 1, np.array([x]), "left")
        nodal = max(nodal, abs(float(value(x)) - float(full[idx] @ vals[:, 0])))

    return ErrorReport(l2=np.sqrt(l2_sq), h1_broken=np.sqrt(h1_sq), nodal_max=nodal)


def observed_orders(h_list, e_list) -> list[float]:
    """Pairwise convergence orders log(e_i/e_{i+1}) / log(h_i/h_{i+1})."""
    h_list = [float(h) for h in h_list]
    e_list = [float(e) for e in e_list]
    if len(h_list) != len(e_list):
        raise ValueError("mesh size and error lists must have equal length")
    if len(h_list) < 2:
        raise ValueError("need at least two refinement levels")
    if any(e <= 0 for e in e_list):
        raise ValueError("orders are undefined for zero or negative errors")
    return [
        np.log(e0 / e1) / np.log(h0 / h1)
        for (h0, h1, e0, e1) in zip(h_list, h_list[1:], e_list, e_list[1:])
    ]


def coefficient_contrast(problem: ProblemSpec) -> float:
    """sup(D) / inf(D) over the layers, sampled pointwise (diagnostic)."""
    a, b = problem.domain
    breaks = [a] + list(problem.breakpoints) + [b]
    hi = -np.inf
    lo = np.inf
    for i, d in enumerate(problem.diffusivity):
        xs = np.linspace(breaks[i], breaks[i + 1], _CONTRAST_SAMPLES)
        vals = eval_coefficient(d, xs)
        hi = max(hi, float(np.max(vals)))
        lo = min(lo, float(np.min(vals)))
    if lo <= 0:
        raise ValueError("diffusivity must be positive to define the contrast")
    return hi / lo
