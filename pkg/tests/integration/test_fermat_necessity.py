"""
Randomized check of the necessary conditions: whenever the grid finds no
point beating xbar, the corresponding Fermat rule must certify xbar.
"""

import numpy as np
import pytest

from setfermat.config.tolerances import Tolerances
from setfermat.core.cone import orthant
from setfermat.maps.setmap import SetMap
from setfermat.oracle.minimality import local_weak_minimality_grid
from setfermat.variational.normals import Omega
from setfermat.variational.stationarity import lower_stationarity, upper_stationarity

CORPUS_SIZE = 60
GRID_STEP = 1e-2
TOLERANCES = Tolerances(tau_stat=1e-6)


def random_component(rng, offset, slope_sign):
    """a + b x + c x^2 + d sin(x) in each coordinate, with |b| in [0.5, 2]"""
    terms = []
    for a in offset:
        b = float(slope_sign * rng.uniform(0.5, 2.0))
        c = float(rng.uniform(-0.5, 0.5))
        d = float(rng.uniform(-0.2, 0.2))
        terms.append(f"({float(a)!r}) + ({b!r})*x1 + ({c!r})*x1^2 + ({d!r})*sin(x1)")
    return terms


def random_offsets(rng, count):
    """Offsets in [-2, 2]^2 pairwise at least 0.2 apart"""
    offsets = []
    while len(offsets) < count:
        candidate = rng.uniform(-2.0, 2.0, size=2)
        if all(np.linalg.norm(candidate - other) >= 0.2 for other in offsets):
            offsets.append(candidate)
    return offsets


def random_map(rng):
    """Up to three components with independently signed slopes"""
    p = int(rng.integers(1, 4))
    components = [random_component(rng, offset, rng.choice([-1.0, 1.0])) for offset in random_offsets(rng, p)]
    return SetMap.from_strings(components, n=1, m=2)


@pytest.fixture(scope="module")
def corpus():
    """Seeded maps on R^1 with images in R^2"""
    rng = np.random.default_rng(61)
    return [random_map(rng) for _ in range(CORPUS_SIZE)]


@pytest.mark.slow
class TestFermatNecessity:
    """Test grid minimality => stationarity on a random corpus"""

    @pytest.mark.parametrize(
        "relation,rule",
        [("l", lower_stationarity), ("u", upper_stationarity)],
    )
    def test_free_corpus(self, corpus, relation, rule):
        """Test every grid-minimal instance of the corpus without constraints"""
        cone = orthant(2)
        minimal = 0
        for setmap in corpus:
            verdict = local_weak_minimality_grid(setmap, cone, [0.0], relation=relation, step=GRID_STEP)
            if not verdict.holds:
                continue
            minimal += 1
            certificate = rule(setmap, cone, [0.0], tol=TOLERANCES)
            assert certificate.stationary, f"{setmap.to_dict()} residual {certificate.residual}"
        assert minimal > 0

    def test_box_corpus(self, corpus):
        """Test the lower rule at the lower bound of [0, 1]"""
        cone = orthant(2)
        omega = Omega.box([0.0], [1.0])
        minimal = 0
        for setmap in corpus:
            verdict = local_weak_minimality_grid(setmap, cone, [0.0], omega, step=GRID_STEP)
            if not verdict.holds:
                continue
            minimal += 1
            assert lower_stationarity(setmap, cone, [0.0], omega, TOLERANCES).stationary
        assert minimal > 0

    def test_singleton_never_minimal(self):
        """Test the control case: no descent-free grid, no certificate"""
        setmap = SetMap.from_strings([["x1", "x1"]], n=1)
        cone = orthant(2)
        assert not local_weak_minimality_grid(setmap, cone, [0.0], step=GRID_STEP).holds
        assert not lower_stationarity(setmap, cone, [0.0]).stationary
