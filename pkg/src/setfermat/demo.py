"""
Built-in golden pipeline.

F(x) = {(x+1, x-1), (-x-1, -x+1)} on R with K = R^2_+ and e = (1, 1), at xbar = 0.
F(0) consists of two mutually incomparable points, the lower and upper Fermat
rules hold at 0, the vector-approach rule fails, and on a grid 0 is locally
weakly minimal for both set relations but not in the vector sense.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, List

import numpy as np

from .config.tolerances import DEFAULT_TOLERANCES, Tolerances
from .core.cone import orthant
from .core.hull import contains_zero, linear_image, min_norm_point, project
from .core.normalcone import NormalConeDescriptor, NormalKind
from .core.scalarize import psi, psi_subdifferential
from .core.setrel import MinimalKind, PointSet, Relation, minimal_elements
from .maps.expr import BinOp, Const, Var, parse, to_text
from .maps.scalfun import f_lower, f_upper, g_lower, g_upper
from .maps.setmap import SetMap
from .oracle.minimality import local_weak_minimality_grid
from .solver.descent import Termination, descend
from .variational.normals import Omega, assemble_G, assemble_H_and_B, coderivative, normal_cone_finite
from .variational.stationarity import lower_stationarity, upper_stationarity, vector_stationarity

logger = logging.getLogger(__name__)

COMPONENTS = [["x1+1", "x1-1"], ["-(x1+1)", "-(x1-1)"]]
# F(x) = {(1, 2), (2, 1)}: every image point is weakly maximal
CONSTANT_COMPONENTS = [["1", "2"], ["2", "1"]]
XBAR = [0.0]
GOLDEN_TOLERANCE = 1e-12
GRID_RADIUS = 0.5
GRID_STEP = 1e-3


def golden_problem():
    """(setmap, cone, omega) of the golden example."""
    return SetMap.from_strings(COMPONENTS, n=1), orthant(2), Omega.free(1)


@dataclass
class DemoCheck:
    name: str
    expected: Any
    actual: Any
    ok: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "ok": self.ok}


@dataclass
class DemoReport:
    checks: List[DemoCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def expect(self, name: str, expected: Any, actual: Any, ok: bool = None) -> None:
        if ok is None:
            ok = expected == actual
        if not ok:
            logger.error(f"Golden check '{name}' failed: expected {expected}, got {actual}")
        self.checks.append(DemoCheck(name, expected, actual, bool(ok)))

    def expect_close(self, name: str, expected: float, actual: float) -> None:
        self.expect(name, expected, actual, abs(expected - actual) <= GOLDEN_TOLERANCE)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [check.to_dict() for check in self.checks]}


def _as_set(vertices) -> List[List[float]]:
    return sorted(PointSet.from_points(np.asarray(vertices), 1e-12).to_list())


def run_demo(tol: Tolerances = DEFAULT_TOLERANCES) -> DemoReport:
    """Run every golden computation and record expected versus actual values."""
    setmap, cone, omega = golden_problem()
    report = DemoReport()
    f0, minus_f0 = np.array([1.0, -1.0]), np.array([-1.0, 1.0])

    report.expect("normalized_generators", [[1.0, 0.0], [0.0, 1.0]], cone.normalized_generators.tolist())
    report.expect_close("psi_along_e", 3.5, psi(cone, 3.5 * cone.e))
    face = psi_subdifferential(cone, np.zeros(2), tol.tau_act)
    report.expect("subdifferential_at_zero", [[0.0, 1.0], [1.0, 0.0]], _as_set(face.vertices))

    first = parse(COMPONENTS[0][0], 1)
    report.expect(
        "parse_first_coordinate", "(x1 + 1.0)", to_text(first.ast), first.ast == BinOp("+", Var(0), Const(1.0))
    )
    value, gradient = first.eval_with_gradient(XBAR)
    report.expect("value_and_gradient_first_coordinate", [1.0, [1.0]], [value, gradient.tolist()])

    image = setmap.evaluate(XBAR, tol.tau_eq)
    report.expect("image_at_xbar", [[-1.0, 1.0], [1.0, -1.0]], sorted(image.points.to_list()))
    report.expect("provenance", [[0], [1]], [list(owners) for owners in image.provenance])
    report.expect("jacobians_at_xbar", [[[1.0], [1.0]], [[-1.0], [-1.0]]], [J.tolist() for J in setmap.jacobians(XBAR)])
    for kind in (MinimalKind.WMIN, MinimalKind.WMAX):
        found = sorted(minimal_elements(image.points, cone, kind, tol.tau_mem).to_list())
        report.expect(f"{kind.value}_equals_image", sorted(image.points.to_list()), found)

    report.expect(
        "normal_cone_of_image_point",
        NormalKind.FULL_SPACE.value,
        normal_cone_finite(image.points, f0, tol.tau_eq).kind.value,
    )
    zstar = np.array([0.25, 0.75])
    report.expect_close("coderivative_at_f", 1.0, float(coderivative(setmap, XBAR, f0, zstar)[0]))
    report.expect_close("coderivative_at_minus_f", -1.0, float(coderivative(setmap, XBAR, minus_f0, zstar)[0]))

    report.expect_close("g_lower_at_f", 0.0, g_lower(setmap, cone, XBAR, f0, tol).value)
    report.expect_close("g_upper_at_f", 0.0, g_upper(setmap, cone, XBAR, f0, tol).value)
    constant = SetMap.from_strings(CONSTANT_COMPONENTS, n=1)
    report.expect_close("g_upper_constant_map_at_wmax", 0.0, g_upper(constant, cone, XBAR, [1.0, 2.0], tol).value)
    for name, func in (("f_lower", f_lower), ("f_upper", f_upper)):
        result = func(setmap, cone, XBAR, XBAR, tol)
        report.expect_close(f"{name}_at_xbar", 0.0, result.value)
        report.expect(f"{name}_witnesses", 2, len(result.outer_witnesses))

    G1, _ = assemble_G(setmap, cone, XBAR, f0, tol)
    report.expect("G1", [[1.0, -1.0, 0.0], [1.0, 0.0, -1.0]], _as_set(G1.vertices))
    report.expect("A1_by_projection", [[1.0]], _as_set(project(G1.vertices, [0])))
    H1, _ = assemble_H_and_B(setmap, cone, XBAR, f0, tol)
    report.expect("H1", [[-1.0, 0.0], [0.0, -1.0]], _as_set(H1.vertices))
    report.expect("B1_by_linear_image", [[1.0]], _as_set(-linear_image(H1.vertices, setmap.jacobian(0, XBAR).T)))

    a_vertices = []
    for label, anchor, expected in (("1", f0, [[1.0]]), ("2", minus_f0, [[-1.0]])):
        _, A = assemble_G(setmap, cone, XBAR, anchor, tol)
        _, B = assemble_H_and_B(setmap, cone, XBAR, anchor, tol)
        report.expect(f"A{label}", expected, _as_set(A.vertices))
        report.expect(f"B{label}", expected, _as_set(B.vertices))
        a_vertices.append(A.vertices)

    union = np.vstack(a_vertices)
    report.expect_close("hull_distance_of_A1_A2", 0.0, min_norm_point(union).distance)
    membership = contains_zero(union, NormalConeDescriptor.zero(1), tol.tau_stat)
    report.expect("zero_in_hull_of_A1_A2", True, membership.decision)
    report.expect(
        "hull_weights_of_A1_A2",
        [0.5, 0.5],
        membership.coefficients.tolist(),
        bool(np.allclose(membership.coefficients, 0.5, atol=GOLDEN_TOLERANCE)),
    )

    lower = lower_stationarity(setmap, cone, XBAR, omega, tol)
    upper = upper_stationarity(setmap, cone, XBAR, omega, tol)
    vector = vector_stationarity(setmap, XBAR, cone, tol)
    report.expect("lower_stationary", True, lower.stationary)
    report.expect("lower_residual_small", True, lower.residual <= GOLDEN_TOLERANCE)
    report.expect("upper_stationary", True, upper.stationary)
    report.expect("upper_residual_small", True, upper.residual <= GOLDEN_TOLERANCE)
    report.expect("vector_stationary", False, vector.stationary)

    for relation, expected in (("l", True), ("u", True), ("vector-weak", False)):
        verdict = local_weak_minimality_grid(
            setmap, cone, XBAR, omega, relation, radius=GRID_RADIUS, step=GRID_STEP, tol=tol
        )
        report.expect(f"grid_minimality_{relation}", expected, verdict.holds)

    trace = descend(setmap, cone, XBAR, omega, Relation.LOWER, tol=tol)
    report.expect("descent_from_xbar", Termination.RESIDUAL_BELOW_TOL.value, trace.termination.value)
    report.expect("descent_from_xbar_accepted_steps", 0, len(trace.accepted))

    return report
