"""
Tests for g_l, g_u, f_l and f_u and their witness sets
"""

import numpy as np
import pytest

from setfermat.config.tolerances import Tolerances
from setfermat.core.scalarize import psi
from setfermat.core.setrel import PointSet, Relation, set_less
from setfermat.maps.scalfun import (
    f_lower,
    f_relation,
    f_upper,
    g_lower,
    g_upper,
    lower_scalarization,
    scalarization,
    upper_scalarization,
)
from setfermat.maps.setmap import SetMap

F0 = np.array([1.0, -1.0])
MINUS_F0 = np.array([-1.0, 1.0])


class TestInnerFunctions:
    """Test g_l and g_u on the golden map"""

    def test_g_lower_at_image_point(self, golden_map, orthant2):
        """Test g_l(0, f(0)) = 0 attained by f(0) only"""
        result = g_lower(golden_map, orthant2, [0.0], F0)
        assert result.value == pytest.approx(0.0)
        assert result.argmin == (0,)
        np.testing.assert_allclose(result.points, [F0])

    def test_g_upper_at_image_point(self, golden_map, orthant2):
        """Test g_u(f(0)) = 0"""
        result = g_upper(golden_map, orthant2, [0.0], F0)
        assert result.value == pytest.approx(0.0)
        assert result.argmin == (0,)

    def test_g_lower_far_point(self, golden_map, orthant2):
        """Test g_l against a brute-force minimum"""
        z = np.array([3.0, -2.0])
        expected = min(psi(orthant2, y - z) for y in golden_map.evaluate([0.4]).points)
        assert g_lower(golden_map, orthant2, [0.4], z).value == pytest.approx(expected)

    def test_ties_are_reported(self, orthant2):
        """Test that every index within the tau_act band is a witness"""
        setmap = SetMap.from_strings([["x1", "2"], ["2", "x1"]], n=1)
        result = g_lower(setmap, orthant2, [0.0], np.zeros(2))
        assert result.value == pytest.approx(2.0)
        assert result.argmin == (0, 1)


class TestOuterFunctions:
    """Test f_l and f_u"""

    def test_golden_values_at_xbar(self, golden_map, orthant2):
        """Test f_l(xbar) = f_u(xbar) = 0 with two outer witnesses"""
        for func in (f_lower, f_upper):
            result = func(golden_map, orthant2, [0.0], [0.0])
            assert result.value == pytest.approx(0.0)
            assert len(result.outer_witnesses) == 2

    def test_lower_witness_sets(self, golden_map, orthant2):
        """Test S^{l,2}: outer witnesses live in F(xbar) and pair with minimizers in F(x)"""
        result = f_lower(golden_map, orthant2, [0.0], [0.0])
        for outer, inner in result.witness_pairs():
            assert outer.tolist() in golden_map.evaluate([0.0]).points.to_list()
            assert psi(orthant2, inner - outer) == pytest.approx(result.value)

    def test_descent_direction_is_negative(self, singleton_map, orthant2):
        """Test f_l,xbar(x) < 0 exactly when F(x) is strictly below F(xbar)"""
        assert f_lower(singleton_map, orthant2, [1.0], [0.5]).value == pytest.approx(-0.5)
        assert f_lower(singleton_map, orthant2, [1.0], [1.5]).value == pytest.approx(0.5)

    def test_upper_orientation(self, singleton_map, orthant2):
        """Test f_u,xbar(x) = max_y min_ybar Psi(y - ybar)"""
        assert f_upper(singleton_map, orthant2, [0.0], [-2.0]).value == pytest.approx(-2.0)

    def test_relation_dispatch(self, golden_map, orthant2):
        """Test that f_relation picks the requested functional"""
        tol = Tolerances()
        lower = f_relation(golden_map, orthant2, [0.0], [0.3], Relation.LOWER, tol)
        upper = f_relation(golden_map, orthant2, [0.0], [0.3], "u", tol)
        assert lower.value == f_lower(golden_map, orthant2, [0.0], [0.3], tol).value
        assert upper.value == f_upper(golden_map, orthant2, [0.0], [0.3], tol).value

    def test_to_dict(self, golden_map, orthant2):
        """Test the serialized witnesses"""
        data = f_lower(golden_map, orthant2, [0.0], [0.0]).to_dict()
        assert sorted(data["outer_witnesses"]) == [[-1.0, 1.0], [1.0, -1.0]]
        assert data["tolerance"] == 1e-8


class TestSetLevelScalarization:
    """Test the finite-set scalarizations against the set relations"""

    @pytest.mark.parametrize("relation", [Relation.LOWER, Relation.UPPER])
    def test_negative_iff_strictly_below(self, orthant2, rng, relation):
        """Test value < 0 iff current is strictly below anchor"""
        seen = set()
        for _ in range(500):
            anchor = PointSet.from_points(rng.uniform(-1.0, 1.0, size=(3, 2)))
            if rng.uniform() < 0.5:
                current = PointSet(points=anchor.points - rng.uniform(0.01, 1.0, size=(3, 2)))
            else:
                current = PointSet.from_points(rng.uniform(-1.0, 1.0, size=(3, 2)))
            value = scalarization(current, anchor, orthant2, relation).value
            below = set_less(current, anchor, orthant2, relation, strict=True)
            assert (value < 0) == below
            seen.add(below)
        assert seen == {True, False}

    def test_outer_sets(self, orthant2):
        """Test which set each variant maximizes over"""
        current = PointSet.from_points([[0, 0], [1, 1]])
        anchor = PointSet.from_points([[2, 2]])
        lower = lower_scalarization(current, anchor, orthant2)
        upper = upper_scalarization(current, anchor, orthant2)
        assert lower.outer_set is anchor
        assert upper.outer_set is current
        assert lower.value == pytest.approx(-2.0)
        assert upper.value == pytest.approx(-1.0)
        assert upper.outer_witnesses == (1,)
