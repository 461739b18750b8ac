"""
Pytest configuration and fixtures
"""

import json

import numpy as np
import pytest
import yaml

from setfermat.core.cone import build_cone, orthant
from setfermat.maps.setmap import SetMap
from setfermat.variational.normals import Omega

GOLDEN_COMPONENTS = [["x1+1", "x1-1"], ["-(x1+1)", "-(x1-1)"]]


@pytest.fixture
def orthant2():
    """R^2_+ with e = (1, 1)"""
    return orthant(2)


@pytest.fixture
def golden_map():
    """F(x) = {(x+1, x-1), (-(x+1), -(x-1))}"""
    return SetMap.from_strings(GOLDEN_COMPONENTS, n=1, labels=["f", "minus_f"])


@pytest.fixture
def singleton_map():
    """F(x) = {(x, x)}"""
    return SetMap.from_strings([["x1", "x1"]], n=1)


@pytest.fixture
def constant_map():
    """F(x) = {(1, 2)} for every x"""
    return SetMap.from_strings([["1", "2"]], n=1)


@pytest.fixture
def unit_box():
    """Omega = [0, 1]"""
    return Omega.box([0.0], [1.0])


@pytest.fixture
def rng():
    """Seeded generator so randomized tests are reproducible"""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_cone(rng):
    """
    Factory for random pointed cones in R^m with e = (1, ..., 1).

    The first m generators perturb the unit basis; extra generators are drawn
    from the positive cube so e stays interior.
    """

    def make(m, extra=1):
        base = np.eye(m) + (0.5 / m) * rng.uniform(-1.0, 1.0, size=(m, m))
        rows = np.vstack([base, rng.uniform(0.0, 1.0, size=(extra, m))])
        return build_cone(rows, np.ones(m))

    return make


@pytest.fixture
def golden_problem_data():
    """Problem file contents for the two-component golden example"""
    return {
        "n": 1,
        "m": 2,
        "cone": "orthant",
        "dim": 2,
        "e": [1, 1],
        "components": GOLDEN_COMPONENTS,
        "labels": ["f", "minus_f"],
        "omega": {"type": "free"},
        "xbar": [0],
    }


@pytest.fixture
def problem_file(tmp_path):
    """Factory writing a problem mapping as JSON (default) or YAML"""

    def write(data, name="problem.json"):
        path = tmp_path / name
        with open(path, "w") as f:
            if path.suffix in (".yaml", ".yml"):
                yaml.dump(data, f)
            else:
                json.dump(data, f)
        return path

    return write


@pytest.fixture
def golden_file(problem_file, golden_problem_data):
    """Golden example problem written to a temporary JSON file"""
    return problem_file(golden_problem_data)
