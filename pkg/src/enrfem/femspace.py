"""Enriched conforming P1/P2 spaces: DOF bookkeeping and basis evaluation.

The space is span{standard Lagrange basis} + span{phi * psi} where psi is
the interface enrichment and phi runs over the Lagrange nodal functions of
the interface element (two hats for degree 1, the three quadratic nodal
functions for degree 2).  DOFs are ordered standard-first, then one
enrichment group per interface in position order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .enrichment import EnrichmentFunction
from .mesh import Mesh1D, locate_element

BC_KINDS = ("dirichlet", "neumann")


@dataclass(frozen=True)
class EnrichedSpace:
    """Standard Lagrange DOFs plus enrichment DOFs per interface.

    ``std_nodes`` holds the coordinates of the standard DOFs (element
    endpoints, plus midpoints for degree 2).  ``constrained`` lists the
    global indices of Dirichlet-constrained standard DOFs; all enrichment
    DOFs are free.  ``free_index`` maps global DOF -> position in the
    free-DOF vector (-1 if constrained).
    """

    mesh: Mesh1D
    degree: int
    enrichments: tuple[EnrichmentFunction, ...]
    std_nodes: np.ndarray
    constrained: tuple[int, ...]
    free_index: np.ndarray
    n_dofs: int
    n_free: int

    @property
    def n_std(self) -> int:
        return len(self.std_nodes)

    def element_std_dofs(self, k: int) -> list[int]:
        if self.degree == 1:
            return [k, k + 1]
        return [2 * k, 2 * k + 1, 2 * k + 2]

    def element_enriched_dofs(self, k: int) -> list[int]:
        """Global indices of the enrichment DOFs living on element k."""
        per = self.degree + 1
        for pos, psi in enumerate(self.enrichments):
            if psi.element == k:
                base = self.n_std + per * pos
                return list(range(base, base + per))
        return []

    def enrichment_on(self, k: int) -> EnrichmentFunction | None:
        for psi in self.enrichments:
            if psi.element == k:
                return psi
        return None

    def dof_table(self) -> list[dict]:
        """Ordered DOF descriptors: standard nodes first, then enrichment.

        Standard entries carry the node coordinate and constrained flag;
        enriched entries the interface position and their attachment node.
        """
        table = [
            {"kind": "standard", "node": float(x), "constrained": i in self.constrained}
            for i, x in enumerate(self.std_nodes)
        ]
        for pos, psi in enumerate(self.enrichments):
            xl, xr = self.mesh.element_bounds(psi.element)
            attach = [xl, xr] if self.degree == 1 else [xl, 0.5 * (xl + xr), xr]
            table.extend(
                {"kind": "enriched", "interface": pos, "attach": node, "constrained": False}
                for node in attach
            )
        return table


def build_space(
    mesh: Mesh1D,
    degree: int,
    enrichments,
    bc_left: str,
    bc_right: str,
) -> EnrichedSpace:
    """Enumerate DOFs for the enriched space on ``mesh``.

    ``enrichments`` must carry exactly the mesh's interface elements.
    Dirichlet ends constrain the boundary standard DOF; Neumann ends are
    natural (free).
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if bc_left not in BC_KINDS or bc_right not in BC_KINDS:
        raise ValueError(f"boundary condition kinds must be one of {BC_KINDS}")

    enrichments = tuple(sorted(enrichments, key=lambda p: p.alpha))
    mesh_elems = sorted(mesh.interface_elements())
    enr_elems = sorted(p.element for p in enrichments)
    if enr_elems != mesh_elems:
        raise ValueError(
            f"enrichment elements {enr_elems} do not match the mesh's "
            f"interface elements {mesh_elems}"
        )
    for psi in enrichments:
        xl, xr = mesh.element_bounds(psi.element)
        if not (xl < psi.alpha < xr):
            raise ValueError("enrichment breakpoint outside its element")

    if degree == 1:
        std_nodes = np.array(mesh.nodes, dtype=float)
    else:
        mids = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
        std_nodes = np.empty(2 * mesh.n_elements + 1)
        std_nodes[0::2] = mesh.nodes
        std_nodes[1::2] = mids

    constrained = []
    if bc_left == "dirichlet":
        constrained.append(0)
    if bc_right == "dirichlet":
        constrained.append(len(std_nodes) - 1)

    n_dofs = len(std_nodes) + (degree + 1) * len(enrichments)
    free_index = np.full(n_dofs, -1, dtype=int)
    mask = np.ones(n_dofs, dtype=bool)
    mask[constrained] = False
    free_index[mask] = np.arange(int(mask.sum()))

    space = EnrichedSpace(
        mesh=mesh,
        degree=degree,
        enrichments=enrichments,
        std_nodes=std_nodes,
        constrained=tuple(constrained),
        free_index=free_index,
        n_dofs=n_dofs,
        n_free=int(mask.sum()),
    )
    space.std_nodes.flags.writeable = False
    space.free_index.flags.writeable = False
    return space


def _lagrange_local(degree: int, xl: float, xr: float, xs: np.ndarray):
    """Local Lagrange basis values/derivatives at points xs in [xl, xr]."""
    h = xr - xl
    if degree == 1:
        vals = np.stack([(xr - xs) / h, (xs - xl) / h])
        ders = np.stack([np.full_like(xs, -1.0 / h), np.full_like(xs, 1.0 / h)])
    else:
        xm = 0.5 * (xl + xr)
        h2 = h * h
        vals = np.stack([
            2.0 * (xs - xm) * (xs - xr) / h2,
            -4.0 * (xs - xl) * (xs - xr) / h2,
            2.0 * (xs - xl) * (xs - xm) / h2,
        ])
        ders = np.stack([
            2.0 * (2.0 * xs - xm - xr) / h2,
            -4.0 * (2.0 * xs - xl - xr) / h2,
            2.0 * (2.0 * xs - xl - xm) / h2,
        ])
    return vals, ders


def _psi_arrays(psi: EnrichmentFunction, xs: np.ndarray, side: str):
    """Vectorized psi values/derivatives; one-sided at alpha per ``side``."""
    inside = (xs >= psi.x_left) & (xs <= psi.x_right)
    if side == "left":
        on_left = xs <= psi.alpha
    else:
        on_left = xs < psi.alpha
    left = inside & on_left
    right = inside & ~on_left
    vals = np.zeros_like(xs)
    ders = np.zeros_like(xs)
    vals[left] = psi.m1 * (xs[left] - psi.x_left)
    ders[left] = psi.m1
    vals[right] = psi.m2 * (xs[right] - psi.x_right)
    ders[right] = psi.m2
    return vals, ders


def element_basis(space: EnrichedSpace, k: int, xs: np.ndarray, side: str = "left"):
    """All DOFs supported on element k evaluated at points xs.

    Returns (dof_indices, values, derivatives) with values/derivatives of
    shape (n_local, len(xs)).  Enriched entries are products of the local
    Lagrange multiplier with psi, differentiated by the product rule.
    """
    xs = np.asarray(xs, dtype=float)
    xl, xr = space.mesh.element_bounds(k)
    vals, ders = _lagrange_local(space.degree, xl, xr, xs)
    idx = list(space.element_std_dofs(k))

    psi = space.enrichment_on(k)
    if psi is not None:
        pv, pd = _psi_arrays(psi, xs, side)
        idx.extend(space.element_enriched_dofs(k))
        enr_vals = vals * pv
        enr_ders = ders * pv + vals * pd
        vals = np.vstack([vals, enr_vals])
        ders = np.vstack([ders, enr_ders])
    return np.array(idx, dtype=int), vals, ders


def eval_basis(space: EnrichedSpace, x: float, side: str = "left"):
    """Entries (dof index, value, derivative) of all DOFs supported at x."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    k = locate_element(space.mesh, x)
    idx, vals, ders = element_basis(space, k, np.array([x]), side)
    return [(int(i), float(v[0]), float(d[0])) for i, v, d in zip(idx, vals, ders)]


def full_coefficients(space: EnrichedSpace, coeffs, constrained_values=None) -> np.ndarray:
    """Expand a free-DOF vector to the full DOF table (Dirichlet lift)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (space.n_free,):
        raise ValueError(f"expected {space.n_free} free coefficients, got {coeffs.shape}")
    if constrained_values is None:
        constrained_values = np.zeros(len(space.constrained))
    constrained_values = np.asarray(constrained_values, dtype=float)
    if constrained_values.shape != (len(space.constrained),):
        raise ValueError(
            f"expected {len(space.constrained)} constrained values, "
            f"got {constrained_values.shape}"
        )
    full = np.empty(space.n_dofs)
    full[space.free_index >= 0] = coeffs[space.free_index[space.free_index >= 0]]
    for i, dof in enumerate(space.constrained):
        full[dof] = constrained_values[i]
    return full


def eval_function(
    space: EnrichedSpace, coeffs, x: float, side: str = "left", constrained_values=None
) -> tuple[float, float]:
    """Value and derivative at x of the function with the given free DOFs."""
    full = full_coefficients(space, coeffs, constrained_values)
    k = locate_element(space.mesh, x)
    idx, vals, ders = element_basis(space, k, np.array([x]), side)
    c = full[idx]
    return float(c @ vals[:, 0]), float(c @ ders[:, 0])
