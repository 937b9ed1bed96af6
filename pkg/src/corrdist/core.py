"""Spaces, correspondences and the generic ``inf F(rho)`` engine.

A dissimilarity measure in this package is always obtained the same way:
pick a set of admissible matchings (correspondences, monotone couplings or
bijections) between two objects, assign every matching a nonnegative cost
with a :class:`FunctionalFamily`, and take the minimum.  Because every
object is finite the minimum is attained, so the engine reports an argmin
alongside the value.  For infinite objects the infimum need not be a
minimum; that situation cannot arise here.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    IndexOutOfRange,
    InvalidMetric,
    NotSurjectiveLeft,
    NotSurjectiveRight,
    TooLarge,
    ValidationError,
)

INFINITY = math.inf

#: absolute tolerance for every floating-point axiom comparison
ATOL = 1e-9

#: exhaustive enumeration is refused above this many candidate cells
MAX_ENUMERATION_CELLS = 25

# enumerations up to this many cells are materialized once and reused
_CACHE_CELLS = 16


class FiniteMetricSpace:
    """A finite set of labelled points with a validated distance matrix.

    Parameters
    ----------
    dist : array_like
        Square matrix of nonnegative distances.
    point_ids : sequence, optional
        Opaque labels; defaults to ``0..n-1``.
    atol : float
        Slack allowed when checking symmetry and the triangle inequality.
    """

    __slots__ = ("dist", "point_ids")

    def __init__(self, dist, point_ids: Sequence[Any] | None = None, atol: float = ATOL):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise InvalidMetric(f"distance matrix must be square and nonempty, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise InvalidMetric("distance matrix has non-finite entries")
        if np.any(d < 0):
            raise InvalidMetric("distance matrix has negative entries")
        if np.any(np.diag(d) != 0):
            raise InvalidMetric("distance matrix has a nonzero diagonal")
        if not np.allclose(d, d.T, rtol=0, atol=atol):
            raise InvalidMetric("distance matrix is not symmetric")
        # d[i,k] <= d[i,j] + d[j,k] for all i, j, k
        slack = d[:, None, :] - (d[:, :, None] + d[None, :, :])
        if np.any(slack > atol):
            i, j, k = np.unravel_index(int(np.argmax(slack)), slack.shape)
            raise InvalidMetric(f"triangle inequality fails for points ({i}, {j}, {k})")
        n = d.shape[0]
        ids = tuple(range(n)) if point_ids is None else tuple(point_ids)
        if len(ids) != n:
            raise InvalidMetric(f"{len(ids)} point ids for {n} points")
        d.setflags(write=False)
        self.dist = d
        self.point_ids = ids

    @classmethod
    def from_points(cls, points, point_ids=None) -> "FiniteMetricSpace":
        """Euclidean metric space on the rows of ``points``."""
        p = np.asarray(points, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        diff = p[:, None, :] - p[None, :, :]
        return cls(np.sqrt((diff**2).sum(axis=-1)), point_ids)

    def __len__(self) -> int:
        return self.dist.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.point_ids == other.point_ids and np.array_equal(self.dist, other.dist)

    def __hash__(self):
        return hash((self.point_ids, self.dist.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self)})"

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    def scaled(self, factor: float) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.dist * factor, self.point_ids)


@dataclass(frozen=True, order=True)
class Correspondence:
    """A relation between ``range(nx)`` and ``range(ny)`` covering both sides.

    ``pairs`` is kept sorted and duplicate-free, so equality is set equality
    and the dataclass ordering is the canonical order used for tie-breaking.
    Construct through :func:`validate_correspondence` unless the pairs are
    already known to be valid.
    """

    pairs: tuple[tuple[int, int], ...]
    nx: int
    ny: int

    def __post_init__(self):
        canonical = tuple(sorted(set((int(i), int(j)) for i, j in self.pairs)))
        object.__setattr__(self, "pairs", canonical)
        _check_pairs(canonical, self.nx, self.ny)

    @classmethod
    def _trusted(cls, pairs, nx, ny) -> "Correspondence":
        obj = object.__new__(cls)
        object.__setattr__(obj, "pairs", pairs)
        object.__setattr__(obj, "nx", nx)
        object.__setattr__(obj, "ny", ny)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Correspondence":
        return cls._trusted(tuple((i, i) for i in range(n)), n, n)

    @classmethod
    def full(cls, nx: int, ny: int) -> "Correspondence":
        return cls._trusted(tuple(itertools.product(range(nx), range(ny))), nx, ny)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in set(self.pairs)

    def inverse(self) -> "Correspondence":
        return invert(self)


def _check_pairs(pairs, nx: int, ny: int) -> None:
    if nx < 1 or ny < 1:
        raise ValidationError(f"both sides need at least one point, got nx={nx}, ny={ny}")
    left = [False] * nx
    right = [False] * ny
    for i, j in pairs:
        if not (0 <= i < nx and 0 <= j < ny):
            raise IndexOutOfRange(f"pair ({i}, {j}) is outside {nx}x{ny}")
        left[i] = True
        right[j] = True
    for i, covered in enumerate(left):
        if not covered:
            raise NotSurjectiveLeft(i)
    for j, covered in enumerate(right):
        if not covered:
            raise NotSurjectiveRight(j)


def validate_correspondence(pairs: Iterable[tuple[int, int]], nx: int, ny: int) -> Correspondence:
    """Return ``pairs`` as a :class:`Correspondence` or raise.

    Raises
    ------
    NotSurjectiveLeft, NotSurjectiveRight
        Naming the first uncovered index.
    IndexOutOfRange
        If a pair does not fit in ``nx x ny``.
    """
    return Correspondence(tuple(pairs), nx, ny)


def invert(rho: Correspondence) -> Correspondence:
    return Correspondence._trusted(tuple(sorted((j, i) for i, j in rho.pairs)), rho.ny, rho.nx)


def compose(rho: Correspondence, sigma: Correspondence) -> Correspondence:
    """Relational composition ``sigma o rho``: first ``rho`` (X->Y), then ``sigma`` (Y->Z)."""
    if rho.ny != sigma.nx:
        raise ArityMismatch(f"cannot compose {rho.nx}x{rho.ny} with {sigma.nx}x{sigma.ny}")
    successors: dict[int, list[int]] = {}
    for j, k in sigma.pairs:
        successors.setdefault(j, []).append(k)
    out = {(i, k) for i, j in rho.pairs for k in successors.get(j, ())}
    # doubly-surjective relations compose to a doubly-surjective relation
    return Correspondence._trusted(tuple(sorted(out)), rho.nx, sigma.ny)


def _generate(nx: int, ny: int) -> Iterator[Correspondence]:
    full = (1 << ny) - 1
    row_choices = range(1, full + 1)
    rows_pairs = [[tuple((i, j) for j in range(ny) if mask >> j & 1) for mask in row_choices] for i in range(nx)]
    for combo in itertools.product(range(full), repeat=nx):
        covered = 0
        for c in combo:
            covered |= c + 1
        if covered != full:
            continue
        pairs = tuple(p for i, c in enumerate(combo) for p in rows_pairs[i][c])
        yield Correspondence._trusted(pairs, nx, ny)


@lru_cache(maxsize=None)
def _cached(nx: int, ny: int) -> tuple[Correspondence, ...]:
    return tuple(_generate(nx, ny))


def enumerate_correspondences(nx: int, ny: int) -> Iterator[Correspondence]:
    """Yield every correspondence between ``nx`` and ``ny`` points exactly once.

    Raises :class:`TooLarge` when ``nx * ny`` exceeds
    :data:`MAX_ENUMERATION_CELLS`.
    """
    if nx < 1 or ny < 1:
        raise ValidationError(f"both sides need at least one point, got nx={nx}, ny={ny}")
    if nx * ny > MAX_ENUMERATION_CELLS:
        raise TooLarge(nx * ny, MAX_ENUMERATION_CELLS, "correspondence grid")
    if nx * ny <= _CACHE_CELLS:
        return iter(_cached(nx, ny))
    return _generate(nx, ny)


def sample_correspondence(nx: int, ny: int, rng: np.random.Generator) -> Correspondence:
    """Draw a random correspondence.

    Uniform over all correspondences while ``nx * ny`` is small enough to
    enumerate or rejection-sample; beyond that every pair is kept with
    probability 1/2 and uncovered indices get a uniformly random partner.
    """
    cells = nx * ny
    if cells <= _CACHE_CELLS:
        table = _cached(nx, ny)
        return table[int(rng.integers(len(table)))]
    if cells <= MAX_ENUMERATION_CELLS:
        for _ in range(1000):
            keep = rng.random((nx, ny)) < 0.5
            if keep.any(axis=1).all() and keep.any(axis=0).all():
                rows, cols = np.nonzero(keep)
                return Correspondence._trusted(tuple(zip(rows.tolist(), cols.tolist())), nx, ny)
    keep = rng.random((nx, ny)) < 0.5
    for i in np.flatnonzero(~keep.any(axis=1)):
        keep[i, rng.integers(ny)] = True
    for j in np.flatnonzero(~keep.any(axis=0)):
        keep[rng.integers(nx), j] = True
    rows, cols = np.nonzero(keep)
    return Correspondence._trusted(tuple(zip(rows.tolist(), cols.tolist())), nx, ny)


class FunctionalFamily(ABC):
    """A cost ``F_(X,Y)`` on the morphisms between two objects.

    Subclasses describe their morphism model (identity, inverse,
    composition, enumeration, sampling) and must implement :meth:`bind`,
    which precomputes whatever ``X`` and ``Y`` allow and returns a fast
    ``morphism -> float`` evaluator.  The defaults below treat morphisms as
    arbitrary correspondences.

    Conforming families are nonnegative, vanish on identities, are invariant
    under inversion and subadditive under composition.  Nothing enforces
    this structurally; use :func:`check_functional_properties`.
    """

    name: str = "functional"
    #: the kind of object the family compares, e.g. ``"metric"``
    context: str = "any"
    context_type: type | tuple[type, ...] = object

    def check_context(self, X) -> None:
        if not isinstance(X, self.context_type):
            raise ValidationError(f"{self.name} expects {self.context} objects, got {type(X).__name__}")

    @abstractmethod
    def bind(self, X, Y) -> Callable[[Any], float]:
        ...

    def __call__(self, morphism, X, Y) -> float:
        return self.bind(X, Y)(morphism)

    def identity(self, X):
        return Correspondence.identity(len(X))

    def invert(self, morphism):
        return invert(morphism)

    def compose(self, rho, sigma):
        """``sigma o rho``, or ``None`` where composition is undefined."""
        return compose(rho, sigma)

    def morphisms(self, X, Y) -> Iterator:
        return enumerate_correspondences(len(X), len(Y))

    def sample(self, X, Y, rng: np.random.Generator):
        return sample_correspondence(len(X), len(Y), rng)

    def distance(self, X, Y) -> float:
        """The induced pseudo-distance; subclasses override with a fast exact solver."""
        return inf_functional(X, Y, self, self.morphisms(X, Y))[0]


def _best(values_and_morphisms) -> tuple[float, Any]:
    best_value, best = INFINITY, None
    for value, m in values_and_morphisms:
        if best is None or value < best_value or (value == best_value and m < best):
            best_value, best = value, m
    return best_value, best


def inf_functional(X, Y, F: FunctionalFamily, morphisms: Iterable, threads: int = 1) -> tuple[float, Any]:
    """Minimum of ``F`` over ``morphisms`` together with one minimizer.

    Ties go to the smallest morphism in canonical order, so the result does
    not depend on the order of the stream or on ``threads``.  An empty
    stream gives ``(INFINITY, None)``.
    """
    F.check_context(X)
    F.check_context(Y)
    evaluate = F.bind(X, Y)
    if threads <= 1:
        return _best((evaluate(m), m) for m in morphisms)
    items = list(morphisms)
    if not items:
        return INFINITY, None
    size = max(1, math.ceil(len(items) / threads))
    chunks = [items[k : k + size] for k in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        partial = list(pool.map(lambda chunk: _best((evaluate(m), m) for m in chunk), chunks))
    return _best(partial)


@dataclass
class Violation:
    """One failed check, with the inputs that witness it."""

    rule: str
    detail: str
    witness: tuple = ()


@dataclass
class PropertyReport:
    functional: str
    trials: int
    checks: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_functional_properties(
    F: FunctionalFamily,
    contexts: tuple,
    trials: int = 100,
    seed: int = 0,
    properties: Sequence[int] = (1, 2, 3, 4),
    atol: float = ATOL,
) -> PropertyReport:
    """Randomized check of the four structural properties of ``F``.

    For each trial a morphism ``rho: X -> Y`` and ``sigma: Y -> Z`` are drawn
    and the report collects every instance where

    1. ``F(rho) < 0``;
    2. ``F(id) != 0`` (checked once per context);
    3. ``F(rho) != F(rho^-1)``;
    4. ``F(sigma o rho) > F(rho) + F(sigma)``.

    Violations are returned, never raised.
    """
    X, Y, Z = contexts
    for obj in contexts:
        F.check_context(obj)
    rng = np.random.default_rng(seed)
    report = PropertyReport(F.name, trials, {f"property_{p}": 0 for p in properties})
    fxy, fyx, fyz, fxz = F.bind(X, Y), F.bind(Y, X), F.bind(Y, Z), F.bind(X, Z)

    if 2 in properties:
        for obj in contexts:
            value = F(F.identity(obj), obj, obj)
            report.checks["property_2"] += 1
            if not abs(value) <= atol:
                report.violations.append(Violation("property_2", f"F(id) = {value!r}", (F.identity(obj),)))

    for _ in range(trials):
        rho = F.sample(X, Y, rng)
        sigma = F.sample(Y, Z, rng)
        f_rho = fxy(rho)
        f_sigma = fyz(sigma)
        if 1 in properties:
            report.checks["property_1"] += 1
            if not f_rho >= 0:
                report.violations.append(Violation("property_1", f"F(rho) = {f_rho!r}", (rho,)))
        if 3 in properties:
            report.checks["property_3"] += 1
            f_inv = fyx(F.invert(rho))
            if not abs(f_rho - f_inv) <= atol:
                report.violations.append(
                    Violation("property_3", f"F(rho) = {f_rho!r} but F(rho^-1) = {f_inv!r}", (rho,))
                )
        if 4 in properties:
            composite = F.compose(rho, sigma)
            if composite is None:
                continue
            report.checks["property_4"] += 1
            f_comp = fxz(composite)
            if not f_comp <= f_rho + f_sigma + atol:
                report.violations.append(
                    Violation(
                        "property_4",
                        f"F(sigma o rho) = {f_comp!r} > {f_rho!r} + {f_sigma!r}",
                        (rho, sigma),
                    )
                )
    return report


@dataclass
class AxiomReport:
    functional: str
    delta: list[list[float]]
    argmins: dict[tuple[int, int], Any] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_pseudo_distance_axioms(
    spaces: Sequence, F: FunctionalFamily, exhaustive: bool = False, atol: float = ATOL
) -> AxiomReport:
    """Compute ``delta`` for all ordered pairs and check the pseudo-distance axioms.

    With ``exhaustive`` every value is the minimum over the full morphism
    enumeration (raising :class:`TooLarge` when that is infeasible);
    otherwise ``F.distance`` is used.
    """
    n = len(spaces)
    delta = [[INFINITY] * n for _ in range(n)]
    report = AxiomReport(F.name, delta)
    for a, b in itertools.product(range(n), repeat=2):
        X, Y = spaces[a], spaces[b]
        if exhaustive:
            value, best = inf_functional(X, Y, F, F.morphisms(X, Y))
            report.argmins[(a, b)] = best
        else:
            F.check_context(X)
            F.check_context(Y)
            value = F.distance(X, Y)
        delta[a][b] = value

    for a in range(n):
        if not abs(delta[a][a]) <= atol:
            report.violations.append(Violation("identity", f"delta({a},{a}) = {delta[a][a]!r}", (a,)))
    for a, b in itertools.combinations(range(n), 2):
        u, v = delta[a][b], delta[b][a]
        if not (u == v or abs(u - v) <= atol):
            report.violations.append(Violation("symmetry", f"delta({a},{b}) = {u!r} != {v!r}", (a, b)))
    for a, b, c in itertools.product(range(n), repeat=3):
        lhs, rhs = delta[a][c], delta[a][b] + delta[b][c]
        if lhs > rhs + atol:
            report.violations.append(
                Violation("triangle", f"delta({a},{c}) = {lhs!r} > {rhs!r} via {b}", (a, b, c))
            )
    return report
