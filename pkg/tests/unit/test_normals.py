"""
Tests for normal cones, coderivatives and estimate polytopes
"""

import numpy as np
import pytest

from setfermat.core.normalcone import NormalKind, SignPattern
from setfermat.core.setrel import PointSet
from setfermat.maps.setmap import SetMap
from setfermat.utils.errors import (
    CollidingComponentsError,
    DimensionMismatchError,
    NotInOmegaError,
    NotWeaklyMaximalError,
    NotWeaklyMinimalError,
    PointNotInSetError,
    PreconditionError,
)
from setfermat.variational.normals import (
    Omega,
    VertexSource,
    assemble_G,
    assemble_H_and_B,
    coderivative,
    normal_cone_box,
    normal_cone_finite,
    replay,
)

F0 = np.array([1.0, -1.0])
MINUS_F0 = np.array([-1.0, 1.0])


@pytest.fixture
def tied_map():
    """F(0) = {(0,0), (-1,0)}: the second point is below the first on a facet of R^2_+"""
    return SetMap.from_strings([["x1", "x1"], ["x1-1", "2*x1"]], n=1)


@pytest.fixture
def stacked_map():
    """F(0) = {(0,0), (1,1)}: (1,1) is not weakly minimal and (0,0) is not weakly maximal"""
    return SetMap.from_strings([["x1", "x1"], ["x1+1", "x1+1"]], n=1)


class TestNormalConeBox:
    """Test sign patterns of box normal cones"""

    def test_patterns(self):
        """Test every per-coordinate case"""
        cone = normal_cone_box([0, -np.inf, 2, 0], [1, np.inf, 2, 1], [0, 5, 2, 0.5])
        assert cone.kind is NormalKind.BOX_PATTERN
        assert cone.pattern == (SignPattern.NONPOS, SignPattern.ZERO, SignPattern.ALL, SignPattern.ZERO)
        assert normal_cone_box([0], [1], [1]).pattern == (SignPattern.NONNEG,)

    def test_tolerance_band(self):
        """Test that points within tau_mem of a bound count as on it"""
        assert normal_cone_box([0], [1], [1 + 1e-10]).pattern == (SignPattern.NONNEG,)

    def test_outside_rejected(self):
        """Test PointNotInSetError outside the box"""
        with pytest.raises(PointNotInSetError):
            normal_cone_box([0], [1], [1.5])

    def test_dimension_checked(self):
        """Test matching dimensions"""
        with pytest.raises(DimensionMismatchError):
            normal_cone_box([0, 0], [1, 1], [0.5])

    def test_interior_is_trivial(self):
        """Test N = {0} strictly inside"""
        assert normal_cone_box([0, 0], [1, 1], [0.5, 0.5]).is_trivial


class TestNormalConeFinite:
    """Test normal cones of finite sets"""

    def test_full_space(self):
        """Test that an isolated point has the full space as normal cone"""
        A = PointSet.from_points([F0, MINUS_F0])
        cone = normal_cone_finite(A, F0)
        assert cone.kind is NormalKind.FULL_SPACE
        assert cone.to_dict() == {"kind": "full_space", "dim": 2}

    def test_point_not_in_set(self):
        """Test PointNotInSetError for a foreign point"""
        with pytest.raises(PointNotInSetError):
            normal_cone_finite(PointSet.from_points([F0]), [0.0, 0.0])


class TestOmega:
    """Test the feasible box"""

    def test_free(self):
        """Test the free space"""
        omega = Omega.free(2)
        assert omega.is_free and omega.n == 2
        assert omega.contains([1e9, -1e9])
        assert omega.normal_cone([3.0, 4.0]).is_trivial
        assert omega.to_dict() == {"type": "free"}

    def test_box(self, unit_box):
        """Test membership, projection and serialization"""
        assert unit_box.contains([0.5])
        assert not unit_box.contains([1.5])
        np.testing.assert_array_equal(unit_box.project([1.5]), [1.0])
        assert unit_box.to_dict() == {"type": "box", "lower": [0.0], "upper": [1.0]}

    def test_require(self, unit_box):
        """Test NotInOmegaError for infeasible points"""
        np.testing.assert_array_equal(unit_box.require([0.25]), [0.25])
        with pytest.raises(NotInOmegaError):
            unit_box.require([-0.5])
        with pytest.raises(NotInOmegaError):
            unit_box.normal_cone([2.0])

    def test_empty_box_rejected(self):
        """Test lower > upper"""
        with pytest.raises(PreconditionError):
            Omega.box([1.0], [0.0])


class TestCoderivative:
    """Test D*F(xbar, ybar)(y*) = J_i^T y*"""

    def test_golden_values(self, golden_map):
        """Test +1 at f(0) and -1 at -f(0) for y* = (0.25, 0.75)"""
        ystar = np.array([0.25, 0.75])
        np.testing.assert_allclose(coderivative(golden_map, [0.0], F0, ystar), [1.0])
        np.testing.assert_allclose(coderivative(golden_map, [0.0], MINUS_F0, ystar), [-1.0])

    def test_nonlinear_component(self):
        """Test the Jacobian transpose of a nonlinear component"""
        setmap = SetMap.from_strings([["x1^2", "x1*x2"]], n=2)
        result = coderivative(setmap, [1.0, 2.0], [1.0, 2.0], [1.0, 1.0])
        np.testing.assert_allclose(result, [2.0 + 2.0, 1.0])

    def test_point_not_in_image(self, golden_map):
        """Test PointNotInSetError for ybar outside F(xbar)"""
        with pytest.raises(PointNotInSetError):
            coderivative(golden_map, [0.0], [0.0, 0.0], [1.0, 0.0])

    def test_ystar_dimension(self, golden_map):
        """Test that y* lives in R^m"""
        with pytest.raises(DimensionMismatchError):
            coderivative(golden_map, [0.0], F0, [1.0])

    def test_collision(self):
        """Test CollidingComponentsError at a shared point"""
        setmap = SetMap.from_strings([["x1", "0"], ["-x1", "0"]], n=1)
        with pytest.raises(CollidingComponentsError):
            coderivative(setmap, [0.0], [0.0, 0.0], [1.0, 0.0])


class TestEstimatePolytopes:
    """Test G, A, H and B"""

    def test_golden_G_and_A(self, golden_map, orthant2):
        """Test G = {(1,-1,0), (1,0,-1)} and A = {1} at f(0)"""
        G, A = assemble_G(golden_map, orthant2, [0.0], F0)
        np.testing.assert_allclose(G.vertices, [[1.0, -1.0, 0.0], [1.0, 0.0, -1.0]])
        np.testing.assert_allclose(A.vertices, [[1.0], [1.0]])
        assert G.provenance == (VertexSource(0, 0, 0), VertexSource(0, 0, 1))
        _, A2 = assemble_G(golden_map, orthant2, [0.0], MINUS_F0)
        np.testing.assert_allclose(A2.vertices, [[-1.0], [-1.0]])

    def test_golden_H_and_B(self, golden_map, orthant2):
        """Test H = -simplex and B = {1} at f(0), B = {-1} at -f(0)"""
        H, B = assemble_H_and_B(golden_map, orthant2, [0.0], F0)
        np.testing.assert_allclose(H.vertices, [[-1.0, 0.0], [0.0, -1.0]])
        np.testing.assert_allclose(B.vertices, [[1.0], [1.0]])
        assert all(source.component is None for source in H.provenance)
        _, B2 = assemble_H_and_B(golden_map, orthant2, [0.0], MINUS_F0)
        np.testing.assert_allclose(B2.vertices, [[-1.0], [-1.0]])

    def test_boundary_matched_points_contribute(self, tied_map, orthant2):
        """Test that zbar with ybar - zbar on bd K adds its own Jacobian"""
        G, A = assemble_G(tied_map, orthant2, [0.0], [0.0, 0.0])
        assert sorted(A.vertices.ravel().tolist()) == [1.0, 1.0, 2.0]
        assert [source.point for source in G.provenance] == [0, 0, 1]
        np.testing.assert_allclose(G.vertices[2], [2.0, 0.0, -1.0])

    def test_upper_boundary_matched(self, tied_map, orthant2):
        """Test H at the weakly maximal point (-1,0) picks up (0,0)"""
        H, B = assemble_H_and_B(tied_map, orthant2, [0.0], [-1.0, 0.0])
        assert len(H) == 3
        assert [source.point for source in H.provenance] == [0, 1, 1]
        # B always uses the anchor's Jacobian J = (1, 2)^T
        assert sorted(B.vertices.ravel().tolist()) == [1.0, 2.0, 2.0]

    def test_not_weakly_minimal(self, stacked_map, orthant2):
        """Test NotWeaklyMinimalError for a dominated anchor"""
        with pytest.raises(NotWeaklyMinimalError):
            assemble_G(stacked_map, orthant2, [0.0], [1.0, 1.0])

    def test_not_weakly_maximal(self, stacked_map, orthant2):
        """Test NotWeaklyMaximalError for a dominated anchor"""
        with pytest.raises(NotWeaklyMaximalError):
            assemble_H_and_B(stacked_map, orthant2, [0.0], [0.0, 0.0])

    def test_anchor_not_in_image(self, golden_map, orthant2):
        """Test PointNotInSetError for a foreign anchor"""
        with pytest.raises(PointNotInSetError):
            assemble_G(golden_map, orthant2, [0.0], [5.0, 5.0])

    @pytest.mark.parametrize("builder", [assemble_G, assemble_H_and_B])
    def test_replay_reproduces_vertices(self, builder, tied_map, orthant2):
        """Test that provenance alone rebuilds every vertex"""
        anchor = [0.0, 0.0] if builder is assemble_G else [-1.0, 0.0]
        for polytope in builder(tied_map, orthant2, [0.0], anchor):
            np.testing.assert_allclose(replay(polytope, tied_map, orthant2, [0.0]), polytope.vertices)

    def test_to_dict(self, golden_map, orthant2):
        """Test polytope serialization"""
        data = assemble_G(golden_map, orthant2, [0.0], F0)[1].to_dict()
        assert data["kind"] == "A"
        assert data["provenance"][0] == {"point": 0, "component": 0, "generator": 0}
