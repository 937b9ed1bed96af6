import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrdist import (
    INFINITY,
    Correspondence,
    FiniteMetricSpace,
    FunctionalFamily,
    check_functional_properties,
    check_pseudo_distance_axioms,
    compose,
    enumerate_correspondences,
    inf_functional,
    invert,
    sample_correspondence,
    validate_correspondence,
)
from corrdist.errors import (
    ArityMismatch,
    IndexOutOfRange,
    InvalidMetric,
    NotSurjectiveLeft,
    NotSurjectiveRight,
    TooLarge,
)
from corrdist.gromov_hausdorff import GROMOV_HAUSDORFF
from corrdist.hausdorff import HAUSDORFF, AmbientSubset

from oracles import correspondence_count, random_metric, relation_masks


@st.composite
def correspondences(draw, nx=None, ny=None):
    nx = nx or draw(st.integers(1, 4))
    ny = ny or draw(st.integers(1, 4))
    cells = draw(st.sets(st.tuples(st.integers(0, nx - 1), st.integers(0, ny - 1))))
    # pad so every row and column is covered
    pairs = set(cells)
    for i in range(nx):
        if not any(p[0] == i for p in pairs):
            pairs.add((i, draw(st.integers(0, ny - 1))))
    for j in range(ny):
        if not any(p[1] == j for p in pairs):
            pairs.add((draw(st.integers(0, nx - 1)), j))
    return validate_correspondence(pairs, nx, ny)


@st.composite
def chains(draw, length):
    sizes = [draw(st.integers(1, 3)) for _ in range(length + 1)]
    return [draw(correspondences(a, b)) for a, b in zip(sizes, sizes[1:])]


class TestFiniteMetricSpace:
    def test_valid(self):
        X = FiniteMetricSpace([[0, 1], [1, 0]], ["a", "b"])
        assert len(X) == 2
        assert X.diameter == 1
        assert X.point_ids == ("a", "b")

    @pytest.mark.parametrize(
        "matrix",
        [
            [[0, 1], [2, 0]],
            [[1, 1], [1, 0]],
            [[0, -1], [-1, 0]],
            [[0, 1, 5], [1, 0, 1], [5, 1, 0]],
            [[0, 1, 2]],
            [],
        ],
    )
    def test_invalid(self, matrix):
        with pytest.raises(InvalidMetric):
            FiniteMetricSpace(matrix)

    def test_from_points(self):
        X = FiniteMetricSpace.from_points([[0, 0], [3, 4]])
        assert X.dist[0, 1] == 5.0


class TestValidate:
    def test_identity(self):
        rho = validate_correspondence({(0, 0)}, 1, 1)
        assert rho.pairs == ((0, 0),)

    def test_left_uncovered(self):
        with pytest.raises(NotSurjectiveLeft) as info:
            validate_correspondence({(0, 0)}, 2, 1)
        assert info.value.index == 1

    def test_right_uncovered(self):
        with pytest.raises(NotSurjectiveRight) as info:
            validate_correspondence({(0, 0), (1, 0)}, 2, 3)
        assert info.value.index == 1

    def test_full_relation(self):
        rho = validate_correspondence({(0, 0), (0, 1), (1, 0), (1, 1)}, 2, 2)
        assert rho == Correspondence.full(2, 2)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            validate_correspondence({(0, 0), (0, 2)}, 1, 2)

    def test_canonical_form(self):
        a = validate_correspondence([(1, 1), (0, 0), (0, 0)], 2, 2)
        b = validate_correspondence([(0, 0), (1, 1)], 2, 2)
        assert a == b and hash(a) == hash(b)


class TestInvertCompose:
    def test_swap(self):
        rho = validate_correspondence({(0, 1), (1, 0)}, 2, 2)
        assert invert(rho) == validate_correspondence({(1, 0), (0, 1)}, 2, 2)

    def test_identity_inverse(self):
        assert invert(Correspondence.identity(3)) == Correspondence.identity(3)

    def test_rectangular_inverse(self):
        rho = validate_correspondence({(0, 0), (0, 1)}, 1, 2)
        inv = invert(rho)
        assert (inv.nx, inv.ny) == (2, 1)
        assert inv.pairs == ((0, 0), (1, 0))

    def test_compose_identities(self):
        assert compose(Correspondence.identity(3), Correspondence.identity(3)) == Correspondence.identity(3)

    def test_compose_permutation(self):
        rho = validate_correspondence({(0, 0), (1, 1)}, 2, 2)
        sigma = validate_correspondence({(0, 1), (1, 0)}, 2, 2)
        assert compose(rho, sigma).pairs == ((0, 1), (1, 0))

    def test_compose_full(self):
        full = Correspondence.full(2, 2)
        assert compose(full, full) == full

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            compose(Correspondence.full(2, 3), Correspondence.full(2, 2))

    @given(correspondences())
    def test_double_inverse(self, rho):
        assert invert(invert(rho)) == rho

    @given(chains(2))
    def test_compose_is_valid(self, chain):
        rho, sigma = chain
        out = compose(rho, sigma)
        assert validate_correspondence(out.pairs, out.nx, out.ny) == out

    @given(chains(3))
    def test_compose_associative(self, chain):
        rho, sigma, tau = chain
        assert compose(compose(rho, sigma), tau) == compose(rho, compose(sigma, tau))

    @given(chains(2))
    def test_compose_matches_definition(self, chain):
        rho, sigma = chain
        expected = {(i, k) for (i, j) in rho.pairs for (j2, k) in sigma.pairs if j == j2}
        assert set(compose(rho, sigma).pairs) == expected


class TestEnumerate:
    def test_single(self):
        assert len(list(enumerate_correspondences(1, 1))) == 1

    def test_two_by_two(self):
        assert len(list(enumerate_correspondences(2, 2))) == 7

    def test_singleton_side(self):
        (only,) = enumerate_correspondences(1, 3)
        assert only == Correspondence.full(1, 3)

    @pytest.mark.parametrize("nx, ny", list(itertools.product(range(1, 5), repeat=2)))
    def test_count_formula(self, nx, ny):
        assert sum(1 for _ in enumerate_correspondences(nx, ny)) == correspondence_count(nx, ny)

    @pytest.mark.parametrize("nx, ny", [(2, 3), (3, 3), (1, 4)])
    def test_matches_brute_force_set(self, nx, ny):
        produced = [frozenset(r.pairs) for r in enumerate_correspondences(nx, ny)]
        assert len(produced) == len(set(produced))
        assert set(produced) == set(relation_masks(nx, ny))

    def test_guard(self):
        with pytest.raises(TooLarge):
            enumerate_correspondences(5, 6)

    def test_guard_boundary_is_lazy(self):
        first = next(enumerate_correspondences(5, 5))
        assert (first.nx, first.ny) == (5, 5)


class TestSampling:
    @pytest.mark.parametrize("nx, ny", [(2, 2), (4, 5), (6, 7)])
    def test_always_valid(self, nx, ny, rng):
        for _ in range(50):
            rho = sample_correspondence(nx, ny, rng)
            assert validate_correspondence(rho.pairs, nx, ny) == rho

    def test_uniform_small(self, rng):
        counts = {}
        for _ in range(7000):
            rho = sample_correspondence(2, 2, rng)
            counts[rho] = counts.get(rho, 0) + 1
        assert len(counts) == 7
        assert min(counts.values()) > 800


class Constant(FunctionalFamily):
    name = "constant"

    def __init__(self, value):
        self.value = value

    def bind(self, X, Y):
        return lambda rho: self.value


class TestInfFunctional:
    def test_empty_stream(self):
        X = AmbientSubset([0.0])
        assert inf_functional(X, X, HAUSDORFF, iter(())) == (INFINITY, None)

    def test_identity_vanishes(self):
        X = AmbientSubset([[0, 0], [1, 2], [3, 1]])
        value, _ = inf_functional(X, X, HAUSDORFF, enumerate_correspondences(3, 3))
        assert value == 0

    def test_single_pair(self):
        X, Y = AmbientSubset([0.0]), AmbientSubset([3.0])
        value, best = inf_functional(X, Y, HAUSDORFF, enumerate_correspondences(1, 1))
        assert value == 3
        assert best.pairs == ((0, 0),)

    def test_order_independent(self, rng):
        X = AmbientSubset(rng.integers(0, 3, size=(3, 1)))
        Y = AmbientSubset(rng.integers(0, 3, size=(3, 1)))
        stream = list(enumerate_correspondences(3, 3))
        expected = inf_functional(X, Y, HAUSDORFF, stream)
        shuffler = random.Random(4)
        for _ in range(5):
            shuffler.shuffle(stream)
            assert inf_functional(X, Y, HAUSDORFF, stream) == expected

    @pytest.mark.parametrize("threads", [2, 3, 8])
    def test_threads_do_not_change_result(self, threads, rng):
        X = AmbientSubset(rng.integers(0, 3, size=(3, 2)))
        Y = AmbientSubset(rng.integers(0, 3, size=(4, 2)))
        stream = list(enumerate_correspondences(3, 4))
        assert inf_functional(X, Y, HAUSDORFF, stream, threads=threads) == inf_functional(X, Y, HAUSDORFF, stream)

    def test_tie_break_is_canonical(self):
        X = AmbientSubset([0.0, 0.0])
        value, best = inf_functional(X, X, Constant(1.0), enumerate_correspondences(2, 2))
        assert value == 1.0
        assert best == min(enumerate_correspondences(2, 2))

    def test_context_checked(self):
        X = FiniteMetricSpace([[0]])
        with pytest.raises(ValueError):
            inf_functional(X, X, HAUSDORFF, enumerate_correspondences(1, 1))


class TestPropertyChecker:
    def test_hausdorff_clean(self, rng):
        X, Y, Z = (AmbientSubset(rng.random((k, 2))) for k in (2, 3, 4))
        report = check_functional_properties(HAUSDORFF, (X, Y, Z), trials=200, seed=1)
        assert report.ok
        assert report.checks["property_4"] == 200

    def test_broken_double(self):
        X = AmbientSubset([0.0, 1.0])
        report = check_functional_properties(Constant(-1.0), (X, X, X), trials=3, seed=0)
        first = [v for v in report.violations if v.rule == "property_1"][0]
        assert "-1.0" in first.detail
        assert report.violations[0].rule == "property_2"
        assert sum(v.rule == "property_1" for v in report.violations) == 3

    def test_gh_clean(self, rng):
        X, Y, Z = (FiniteMetricSpace(random_metric(rng, k)) for k in (3, 2, 4))
        report = check_functional_properties(GROMOV_HAUSDORFF, (X, Y, Z), trials=200, seed=2)
        assert report.ok, report.violations

    def test_subset_of_properties(self):
        X = AmbientSubset([0.0])
        report = check_functional_properties(Constant(-1.0), (X, X, X), trials=2, properties=(3,))
        assert report.ok
        assert set(report.checks) == {"property_3"}


class TestAxiomChecker:
    def test_repeated_space(self):
        X = AmbientSubset([[0, 0], [1, 1]])
        report = check_pseudo_distance_axioms([X, X, X], HAUSDORFF, exhaustive=True)
        assert report.ok
        assert all(v == 0 for row in report.delta for v in row)

    def test_single_space(self):
        report = check_pseudo_distance_axioms([AmbientSubset([1.0])], HAUSDORFF)
        assert report.ok and report.delta == [[0.0]]

    def test_gh_random(self, rng):
        spaces = [FiniteMetricSpace(random_metric(rng, int(rng.integers(1, 5)))) for _ in range(3)]
        assert check_pseudo_distance_axioms(spaces, GROMOV_HAUSDORFF).ok

    def test_exhaustive_guard(self):
        big = AmbientSubset(np.arange(6.0))
        with pytest.raises(TooLarge):
            check_pseudo_distance_axioms([big], HAUSDORFF, exhaustive=True)

    def test_exhaustive_agrees_with_fast(self, rng):
        spaces = [AmbientSubset(rng.random((int(rng.integers(1, 4)), 2))) for _ in range(4)]
        slow = check_pseudo_distance_axioms(spaces, HAUSDORFF, exhaustive=True)
        fast = check_pseudo_distance_axioms(spaces, HAUSDORFF)
        assert slow.delta == fast.delta

    def test_reports_violations(self):
        class Asymmetric(FunctionalFamily):
            name = "asymmetric"

            def bind(self, X, Y):
                return lambda rho: float(len(Y) - len(X)) if len(Y) > len(X) else 0.0

        spaces = [AmbientSubset([0.0]), AmbientSubset([0.0, 1.0])]
        report = check_pseudo_distance_axioms(spaces, Asymmetric())
        assert [v.rule for v in report.violations] == ["symmetry"]
