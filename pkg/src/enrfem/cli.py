"""Command-line driver for convergence studies and benchmark reproduction.

    enrfem --problem 1 --degree 1 --h0 1/8 --levels 7 --cond --format csv

runs the chosen benchmark (or a problem file) over a sequence of halved
mesh sizes and emits a machine-readable table of errors, condition
numbers, and observed orders.  Exit codes: 0 success, 1 usage or parse
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from numpy.polynomial import Polynomial

from ._version import __version__
from .analysis import ExactSolution, compute_errors, observed_orders
from .assembly import (
    BoundaryCondition,
    InterfaceSpec,
    ProblemSpec,
    assemble_system,
    condition_number,
    eval_coefficient,
    solve_system,
    space_for_problem,
)
from .bench import catalog_problem, manufactured_rhs
from .mesh import build_mesh

REPORT_FORMATS = ("csv", "markdown", "json")
ERROR_QUAD_NPTS = 12  # error norms need a finer rule than assembly
_NUM = "{:.5e}"       # 6 significant digits


class ProblemFileError(ValueError):
    """Problem-file syntax or schema violation (usage error, exit 1)."""


@dataclass
class ConvergenceTable:
    """Per-refinement errors, condition numbers, and observed orders."""

    rows: list[dict] = field(default_factory=list)
    orders: dict[str, list[float]] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        hs = [row["h"] for row in self.rows]
        if any(x <= y for x, y in zip(hs, hs[1:])):
            raise ValueError("mesh sizes must be strictly decreasing")
        for col in self.orders.values():
            # empty means orders were undefined (an error column hit zero)
            if len(col) not in (0, max(len(self.rows) - 1, 0)):
                raise ValueError("order columns must have one fewer entry than rows")


def _coeff_list_to_poly(values, where: str) -> Polynomial:
    try:
        coeffs = [float(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"field '{where}': expected a list of numbers") from exc
    if not coeffs:
        raise ProblemFileError(f"field '{where}': empty coefficient list")
    return Polynomial(coeffs)


def _parse_bc(spec, where: str) -> BoundaryCondition:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ProblemFileError(
            f"field '{where}': expected {{\"dirichlet\": value}} or {{\"neumann\": value}}"
        )
    kind, value = next(iter(spec.items()))
    if kind not in ("dirichlet", "neumann"):
        raise ProblemFileError(f"field '{where}': unknown kind '{kind}'")
    return BoundaryCondition(kind, float(value))


def load_problem_file(path) -> ProblemSpec:
    """Parse a JSON problem file into a ProblemSpec.

    Schema: domain [a, b]; layers (list of {D, delta_conv, w, f}) with
    polynomial coefficient lists in ascending degree, f optionally the
    string "manufactured"; interfaces (list of {alpha, kind, lambda});
    bc {left, right}; optional exact (per-layer coefficient lists).
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc

    for key in ("domain", "layers", "interfaces", "bc"):
        if key not in doc:
            raise ProblemFileError(f"{path}: missing required field '{key}'")
    try:
        a, b = (float(v) for v in doc["domain"])
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{path}: field 'domain': expected [a, b]") from exc

    layers = doc["layers"]
    if not isinstance(layers, list) or not layers:
        raise ProblemFileError(f"{path}: field 'layers': expected a non-empty list")
    if len(doc["interfaces"]) != len(layers) - 1:
        raise ProblemFileError(
            f"{path}: {len(layers)} layers require {len(layers) - 1} interfaces, "
            f"got {len(doc['interfaces'])}"
        )

    diffusivity, conv, reaction, f_specs = [], [], [], []
    for i, layer in enumerate(layers):
        for key in ("D", "delta_conv", "w", "f"):
            if key not in layer:
                raise ProblemFileError(f"{path}: layer {i}: missing field '{key}'")
        diffusivity.append(_coeff_list_to_poly(layer["D"], f"layers[{i}].D"))
        conv.append(_coeff_list_to_poly(layer["delta_conv"], f"layers[{i}].delta_conv"))
        reaction.append(_coeff_list_to_poly(layer["w"], f"layers[{i}].w"))
        f_specs.append(layer["f"])

    exact = None
    if doc.get("exact") is not None:
        branches = doc["exact"]
        if len(branches) != len(layers):
            raise ProblemFileError(f"{path}: field 'exact': need one branch per layer")
        polys = [_coeff_list_to_poly(c, f"exact[{i}]") for i, c in enumerate(branches)]
        alphas = [float(spec["alpha"]) for spec in doc["interfaces"]]
        exact = ExactSolution.from_polynomials(polys, alphas)

    interfaces = []
    for i, spec in enumerate(doc["interfaces"]):
        where = f"interfaces[{i}]"
        if "alpha" not in spec or "kind" not in spec:
            raise ProblemFileError(f"{path}: {where}: needs 'alpha' and 'kind'")
        alpha = float(spec["alpha"])
        if spec["kind"] == "continuous":
            interfaces.append(InterfaceSpec.continuous(alpha))
        elif spec["kind"] == "implicit":
            if "lambda" not in spec:
                raise ProblemFileError(f"{path}: {where}: implicit kind needs 'lambda'")
            d_minus = float(eval_coefficient(diffusivity[i], np.array(alpha)))
            d_plus = float(eval_coefficient(diffusivity[i + 1], np.array(alpha)))
            interfaces.append(
                InterfaceSpec.implicit(alpha, float(spec["lambda"]), d_minus, d_plus)
            )
        else:
            raise ProblemFileError(f"{path}: {where}: unknown kind '{spec['kind']}'")

    source = []
    manufactured = None
    for i, f_spec in enumerate(f_specs):
        if f_spec == "manufactured":
            if exact is None:
                raise ProblemFileError(
                    f"{path}: layers[{i}].f: \"manufactured\" requires 'exact' branches"
                )
            if manufactured is None:
                manufactured = manufactured_rhs(exact, diffusivity, conv, reaction)
            source.append(manufactured[i])
        else:
            source.append(_coeff_list_to_poly(f_spec, f"layers[{i}].f"))

    try:
        return ProblemSpec(
            domain=(a, b),
            diffusivity=tuple(diffusivity),
            conv_delta=tuple(conv),
            reaction=tuple(reaction),
            source=tuple(source),
            interfaces=tuple(interfaces),
            bc_left=_parse_bc(doc["bc"].get("left"), "bc.left"),
            bc_right=_parse_bc(doc["bc"].get("right"), "bc.right"),
            exact=exact,
        )
    except ValueError as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc


def _resolve_problem(problem) -> tuple[ProblemSpec, str, int | None]:
    """(spec, label, default degree) from a catalog id or a file path."""
    text = str(problem)
    if text.isdigit():
        try:
            entry = catalog_problem(int(text))
        except ValueError as exc:
            raise ProblemFileError(str(exc)) from exc
        return entry.problem, text, entry.degree
    return load_problem_file(text), text, None


def _elements_for(h0: Fraction, a: float, b: float) -> int:
    n = (b - a) / float(h0)
    if abs(n - round(n)) > 1e-9 * max(n, 1.0) or round(n) < 2:
        raise ValueError(f"h0={h0} does not tile the domain ({a}, {b}) into >= 2 elements")
    return int(round(n))


def run_convergence(
    problem,
    degree: int,
    h0,
    levels: int,
    with_cond: bool = False,
    quad_npts: int = 6,
) -> ConvergenceTable:
    """Solve on meshes h0, h0/2, ... and tabulate errors and orders.

    ``problem`` is a catalog id (1..6) or a problem-file path; the problem
    must carry an exact solution.  All meshes are validated up front so an
    interface-node collision is reported with its level before any solve.
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if levels < 1:
        raise ValueError("need at least one refinement level")
    spec, label, _ = _resolve_problem(problem)
    if spec.exact is None:
        raise ValueError(
            "convergence study requires an exact solution "
            "(catalog problem or problem file with 'exact')"
        )
    h0 = Fraction(str(h0)) if not isinstance(h0, Fraction) else h0
    a, b = spec.domain
    n0 = _elements_for(h0, a, b)
    alphas = [s.alpha for s in spec.interfaces]

    meshes = []
    for level in range(levels):
        try:
            meshes.append(build_mesh(a, b, n0 * 2**level, alphas))
        except ValueError as exc:
            raise ValueError(f"level {level} (n={n0 * 2 ** level}): {exc}") from exc

    rows = []
    for mesh in meshes:
        space = space_for_problem(spec, mesh, degree)
        system = assemble_system(spec, space, quad_npts)
        coeffs = solve_system(system)
        report = compute_errors(
            spec.exact, space, coeffs, ERROR_QUAD_NPTS, system.constrained_values
        )
        rows.append({
            "h": (b - a) / mesh.n_elements,
            "l2": report.l2,
            "h1_broken": report.h1_broken,
            "nodal": report.nodal_max,
            "cond": condition_number(system.matrix) if with_cond else None,
        })

    hs = [row["h"] for row in rows]
    orders = {}
    for key in ("l2", "h1_broken", "nodal"):
        errs = [row[key] for row in rows]
        orders[key] = observed_orders(hs, errs) if len(rows) > 1 and min(errs) > 0 else []
    return ConvergenceTable(
        rows=rows,
        orders=orders,
        metadata={
            "problem": label,
            "degree": degree,
            "quad_npts": quad_npts,
            "error_quad_npts": ERROR_QUAD_NPTS,
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        },
    )


def _row_cells(table: ConvergenceTable, i: int) -> list[str]:
    row = table.rows[i]
    cells = [_NUM.format(row["h"])]
    for key in ("l2", "h1_broken", "nodal"):
        cells.append(_NUM.format(row[key]))
    cells.append("" if row["cond"] is None else _NUM.format(row["cond"]))
    for key in ("l2", "h1_broken", "nodal"):
        col = table.orders.get(key, [])
        cells.append(_NUM.format(col[i - 1]) if i > 0 and col else "")
    return cells


_HEADER = ["h", "l2", "h1_broken", "nodal", "cond", "order_l2", "order_h1", "order_nodal"]


def emit_report(table: ConvergenceTable, fmt: str) -> str:
    """Render the table as csv, markdown, or json (byte-stable per input)."""
    if not table.rows:
        raise ValueError("cannot emit an empty table")
    if fmt == "csv":
        lines = [",".join(_HEADER)]
        lines += [",".join(_row_cells(table, i)) for i in range(len(table.rows))]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        width = 12
        def fmt_row(cells):
            return "| " + " | ".join(c.ljust(width) for c in cells) + " |"
        lines = [fmt_row(_HEADER), fmt_row(["-" * width] * len(_HEADER))]
        lines += [fmt_row(_row_cells(table, i)) for i in range(len(table.rows))]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        rows = []
        for i, row in enumerate(table.rows):
            entry = {
                "h": row["h"], "l2": row["l2"], "h1_broken": row["h1_broken"],
                "nodal": row["nodal"], "cond": row["cond"],
            }
            for key, name in (("l2", "order_l2"), ("h1_broken", "order_h1"), ("nodal", "order_nodal")):
                col = table.orders.get(key, [])
                entry[name] = col[i - 1] if i > 0 and col else None
            rows.append(entry)
        return json.dumps({"metadata": table.metadata, "rows": rows}, indent=2) + "\n"
    raise ValueError(f"unknown format '{fmt}'; valid formats: {', '.join(REPORT_FORMATS)}")


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the CLI contract wants 1.
    def error(self, message):
        raise ProblemFileError(message)


def main(argv=None) -> int:
    parser = _ArgumentParser(
        prog="enrfem",
        description="Convergence studies for enriched 1D interface finite elements.",
    )
    parser.add_argument("--problem", required=True,
                        help="benchmark id 1..6 or path to a JSON problem file")
    parser.add_argument("--degree", type=int, choices=(1, 2), default=None,
                        help="element degree (default: the benchmark's, else 1)")
    parser.add_argument("--h0", default="1/8", help="coarsest mesh size, e.g. 1/8")
    parser.add_argument("--levels", type=int, default=7, help="number of refinements")
    parser.add_argument("--cond", action="store_true", help="report condition numbers")
    parser.add_argument("--quad", type=int, default=6, help="Gauss points per sub-interval")
    parser.add_argument("--format", choices=REPORT_FORMATS, default="csv")
    parser.add_argument("--out", default="stdout", help="output path or 'stdout'")

    try:
        args = parser.parse_args(argv)
        h0 = Fraction(args.h0)
    except (ProblemFileError, ValueError, ZeroDivisionError) as exc:
        print(f"enrfem: error: {exc}", file=sys.stderr)
        return 1

    degree = args.degree
    if degree is None:
        text = str(args.problem)
        degree = catalog_problem(int(text)).degree if text.isdigit() and 1 <= int(text) <= 6 else 1

    try:
        table = run_convergence(
            args.problem, degree, h0, args.levels,
            with_cond=args.cond, quad_npts=args.quad,
        )
        text = emit_report(table, args.format)
    except ProblemFileError as exc:
        print(f"enrfem: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"enrfem: numerical failure: {exc}", file=sys.stderr)
        return 2

    if args.out == "stdout":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
