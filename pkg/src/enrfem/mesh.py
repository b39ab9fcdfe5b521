"""1D partitions that are unfitted to interface points.

The mesh is an ordinary partition a = x_0 < ... < x_n = b; interface
points are required to fall strictly inside elements (never on a node),
and each element may contain at most one interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# An interface closer to a node than this fraction of the domain length is
# treated as sitting on the node and rejected.
NODE_COINCIDENCE_RTOL = 1e-14


@dataclass(frozen=True)
class InterfaceHit:
    """Location of one interface point inside the mesh."""

    interface: int  # index into the interface list the mesh was built from
    element: int    # element k with x_k < alpha < x_{k+1}
    alpha: float


@dataclass(frozen=True)
class Mesh1D:
    """Partition of [a, b] with located interface elements.

    ``nodes`` is strictly increasing; ``interface_hits`` is ordered by
    position.  Instances are immutable and safe to share between workers.
    """

    nodes: np.ndarray
    interface_hits: tuple[InterfaceHit, ...]
    h_max: float

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    def element_bounds(self, k: int) -> tuple[float, float]:
        return float(self.nodes[k]), float(self.nodes[k + 1])

    def interface_elements(self) -> tuple[int, ...]:
        return tuple(hit.element for hit in self.interface_hits)


def mesh_from_nodes(nodes, interfaces=()) -> Mesh1D:
    """Build a (possibly non-uniform) mesh from explicit node coordinates.

    Each interface must lie strictly inside an element; an interface within
    ``NODE_COINCIDENCE_RTOL * (b - a)`` of a node is rejected, as are two
    interfaces sharing one element.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 3:
        raise ValueError("mesh needs at least 3 nodes (2 elements)")
    if not np.all(np.diff(nodes) > 0):
        raise ValueError("mesh nodes must be strictly increasing")

    a, b = float(nodes[0]), float(nodes[-1])
    tol = NODE_COINCIDENCE_RTOL * (b - a)
    alphas = [float(al) for al in interfaces]
    if len(set(alphas)) != len(alphas):
        raise ValueError("interface points must be pairwise distinct")

    hits = []
    for i, alpha in enumerate(alphas):
        if not (a < alpha < b):
            raise ValueError(f"interface {alpha} not strictly inside ({a}, {b})")
        if np.min(np.abs(nodes - alpha)) <= tol:
            raise ValueError(
                f"interface {alpha} coincides with a mesh node; choose a "
                "different number of elements so the interface falls inside one"
            )
        k = int(np.searchsorted(nodes, alpha) - 1)
        hits.append(InterfaceHit(interface=i, element=k, alpha=alpha))

    by_element: dict[int, float] = {}
    for hit in hits:
        if hit.element in by_element:
            raise ValueError(
                f"interfaces {by_element[hit.element]} and {hit.alpha} fall in "
                f"the same element {hit.element}; refine the mesh"
            )
        by_element[hit.element] = hit.alpha

    hits.sort(key=lambda h: h.alpha)
    mesh = Mesh1D(
        nodes=nodes,
        interface_hits=tuple(hits),
        h_max=float(np.max(np.diff(nodes))),
    )
    mesh.nodes.flags.writeable = False
    return mesh


def build_mesh(a: float, b: float, n: int, interfaces=()) -> Mesh1D:
    """Uniform partition of [a, b] into n elements with located interfaces."""
    if not a < b:
        raise ValueError("domain requires a < b")
    if n < 2:
        raise ValueError("need at least 2 elements")
    return mesh_from_nodes(np.linspace(a, b, n + 1), interfaces)


def locate_element(mesh: Mesh1D, x: float) -> int:
    """Index i of the element with x_i <= x <= x_{i+1}.

    At a shared node x_i the element [x_i, x_{i+1}] is returned (the node is
    its left endpoint); at x_n the last element.
    """
    if x < mesh.a or x > mesh.b:
        raise ValueError(f"x={x} outside [{mesh.a}, {mesh.b}]")
    k = int(np.searchsorted(mesh.nodes, x, side="right")) - 1
    return min(max(k, 0), mesh.n_elements - 1)
