import numpy as np
import pytest

from corrdist import (
    Correspondence,
    FiniteMetricSpace,
    check_functional_properties,
    compose,
    enumerate_correspondences,
    inf_functional,
    validate_correspondence,
)
from corrdist.errors import TooLarge
from corrdist.gromov_hausdorff import (
    GROMOV_HAUSDORFF,
    distortion,
    gh_diameter_lower_bound,
    gh_exact,
    gh_functional,
)

from oracles import is_isometric, random_metric

ZERO_ONE = FiniteMetricSpace.from_points([0.0, 1.0])
ZERO_TWO = FiniteMetricSpace.from_points([0.0, 2.0])
POINT = FiniteMetricSpace([[0.0]])


def brute_gh(X, Y):
    return inf_functional(X, Y, GROMOV_HAUSDORFF, enumerate_correspondences(len(X), len(Y)))


class TestDistortion:
    def test_isometry(self):
        X = FiniteMetricSpace(random_metric(np.random.default_rng(0), 4))
        assert distortion(Correspondence.identity(4), X, X) == 0

    def test_bijection(self):
        rho = validate_correspondence({(0, 0), (1, 1)}, 2, 2)
        assert distortion(rho, ZERO_ONE, ZERO_TWO) == 1
        assert gh_functional(rho, ZERO_ONE, ZERO_TWO) == 0.5

    @pytest.mark.parametrize("a", [1.0, 2.5, 7.0])
    def test_point_vs_pair(self, a):
        Y = FiniteMetricSpace.from_points([0.0, a])
        (rho,) = enumerate_correspondences(1, 2)
        assert distortion(rho, POINT, Y) == a
        assert gh_functional(rho, POINT, Y) == a / 2

    def test_subadditive_under_composition(self, rng):
        for _ in range(100):
            X, Y, Z = (FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5)))) for _ in range(3))
            rho = GROMOV_HAUSDORFF.sample(X, Y, rng)
            sigma = GROMOV_HAUSDORFF.sample(Y, Z, rng)
            assert distortion(compose(rho, sigma), X, Z) <= distortion(rho, X, Y) + distortion(sigma, Y, Z) + 1e-9


class TestExact:
    def test_same_space(self):
        X = FiniteMetricSpace(random_metric(np.random.default_rng(1), 4))
        assert gh_exact(X, X)[0] == 0

    def test_two_point_spaces(self):
        value, rho = gh_exact(ZERO_ONE, ZERO_TWO)
        assert value == 0.5
        assert brute_gh(ZERO_ONE, ZERO_TWO)[0] == 0.5
        assert gh_functional(rho, ZERO_ONE, ZERO_TWO) == 0.5

    def test_point_vs_pair(self):
        assert gh_exact(POINT, FiniteMetricSpace.from_points([0.0, 4.0]))[0] == 2

    def test_guard(self):
        with pytest.raises(TooLarge):
            gh_exact(FiniteMetricSpace.from_points(np.arange(5.0)), FiniteMetricSpace.from_points(np.arange(6.0)))

    def test_guard_boundary(self):
        X = FiniteMetricSpace.from_points(np.arange(5.0))
        Y = FiniteMetricSpace.from_points(np.arange(5.0) * 1.5)
        value, _ = gh_exact(X, Y)
        assert gh_diameter_lower_bound(X, Y) <= value

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        nx, ny = (int(k) for k in rng.integers(1, 4, size=2))
        if seed % 8 == 0:
            nx, ny = 4, 4
        X, Y = FiniteMetricSpace(random_metric(rng, nx)), FiniteMetricSpace(random_metric(rng, ny))
        value, rho = gh_exact(X, Y)
        assert value == brute_gh(X, Y)[0]
        assert gh_functional(rho, X, Y) == value

    @pytest.mark.parametrize("seed", range(20))
    def test_symmetric(self, seed):
        rng = np.random.default_rng(seed)
        X = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5))))
        Y = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5))))
        assert gh_exact(X, Y)[0] == gh_exact(Y, X)[0]

    @pytest.mark.parametrize("seed", range(20))
    def test_scale_equivariance(self, seed):
        rng = np.random.default_rng(seed)
        X = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5)), "grid"))
        Y = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5)), "graph"))
        for factor in (2.0, 0.5, 4.0):
            assert gh_exact(X.scaled(factor), Y.scaled(factor))[0] == factor * gh_exact(X, Y)[0]

    def test_zero_iff_isometric(self):
        rng = np.random.default_rng(7)
        corpus = [random_metric(rng, int(rng.integers(1, 5)), "grid") for _ in range(14)]
        corpus += [corpus[3][np.ix_(p, p)] for p in [list(reversed(range(len(corpus[3]))))]]
        for a in corpus:
            for b in corpus:
                zero = gh_exact(FiniteMetricSpace(a), FiniteMetricSpace(b))[0] == 0
                assert zero == is_isometric(a, b)


class TestLowerBound:
    def test_same(self):
        assert gh_diameter_lower_bound(ZERO_ONE, ZERO_ONE) == 0

    def test_diameters(self):
        assert gh_diameter_lower_bound(ZERO_ONE, ZERO_TWO) == 0.5

    def test_below_exact(self, rng):
        for _ in range(50):
            X = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5))))
            Y = FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5))))
            assert gh_diameter_lower_bound(X, Y) <= gh_exact(X, Y)[0]


def test_properties(rng):
    for _ in range(5):
        X, Y, Z = (FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5)))) for _ in range(3))
        report = check_functional_properties(GROMOV_HAUSDORFF, (X, Y, Z), trials=100, seed=int(rng.integers(1000)))
        assert report.ok, report.violations
