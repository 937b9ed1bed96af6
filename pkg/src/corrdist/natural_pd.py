"""Natural pseudo-distance between finite measured spaces.

Homeomorphisms between closed manifolds are modelled by bijections between
finite vertex sets.  When the sizes differ no bijection exists and the
distance is infinite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import INFINITY, FunctionalFamily
from .errors import SizeMismatch, TooLarge, ValidationError

#: permutation brute force is refused above this size
MAX_BRUTEFORCE = 8


class MeasuredSpace:
    """Points carrying one real measurement each."""

    __slots__ = ("values", "point_ids")

    def __init__(self, values, point_ids: Sequence | None = None):
        v = np.array(values, dtype=float).ravel()
        if v.size == 0:
            raise ValidationError("a measured space needs at least one point")
        if not np.all(np.isfinite(v)):
            raise ValidationError("measurement values must be finite")
        ids = tuple(range(v.size)) if point_ids is None else tuple(point_ids)
        if len(ids) != v.size:
            raise ValidationError(f"{len(ids)} ids for {v.size} values")
        v.setflags(write=False)
        self.values = v
        self.point_ids = ids

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasuredSpace):
            return NotImplemented
        return self.point_ids == other.point_ids and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"MeasuredSpace(n={len(self)})"


@dataclass(frozen=True, order=True)
class Bijection:
    """``mapping[i]`` is the image in Y of point ``i`` of X."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(k) for k in self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValidationError(f"{mapping} is not a permutation")

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "Bijection":
        inv = [0] * len(self.mapping)
        for i, k in enumerate(self.mapping):
            inv[k] = i
        return Bijection(tuple(inv))

    def then(self, other: "Bijection") -> "Bijection":
        """``other o self``."""
        if len(other) != len(self):
            raise SizeMismatch(f"cannot compose bijections of sizes {len(self)} and {len(other)}")
        return Bijection(tuple(other.mapping[k] for k in self.mapping))

    @classmethod
    def identity(cls, n: int) -> "Bijection":
        return cls(tuple(range(n)))


def _costs(phi: MeasuredSpace, psi: MeasuredSpace) -> np.ndarray:
    return np.abs(phi.values[:, None] - psi.values[None, :])


class NaturalPseudoDistance(FunctionalFamily):
    """``F(h) = max_i |phi[i] - psi[h[i]]|`` over bijections."""

    name = "npd"
    context = "measured space"
    context_type = MeasuredSpace

    def bind(self, X, Y):
        C = _costs(X, Y).tolist()
        n = len(X)

        def evaluate(h):
            if len(h) != n or len(Y) != n:
                raise SizeMismatch(f"bijection of size {len(h)} between spaces of sizes {n} and {len(Y)}")
            return max(C[i][k] for i, k in enumerate(h.mapping))

        return evaluate

    def identity(self, X):
        return Bijection.identity(len(X))

    def invert(self, h):
        return h.inverse()

    def compose(self, rho, sigma):
        return rho.then(sigma)

    def morphisms(self, X, Y):
        if len(X) != len(Y):
            return iter(())
        if len(X) > MAX_BRUTEFORCE:
            raise TooLarge(len(X), MAX_BRUTEFORCE, "permutation set")
        return (Bijection(p) for p in itertools.permutations(range(len(X))))

    def sample(self, X, Y, rng):
        if len(X) != len(Y):
            raise SizeMismatch(f"no bijection between sizes {len(X)} and {len(Y)}")
        return Bijection(tuple(rng.permutation(len(X)).tolist()))

    def distance(self, X, Y) -> float:
        return npd_exact(X, Y)[0]


NATURAL_PSEUDO_DISTANCE = NaturalPseudoDistance()


def npd_functional(h: Bijection, phi: MeasuredSpace, psi: MeasuredSpace) -> float:
    return NATURAL_PSEUDO_DISTANCE(h, phi, psi)


def _perfect_matching(allowed: np.ndarray) -> np.ndarray | None:
    match = maximum_bipartite_matching(csr_matrix(allowed.astype(np.int8)), perm_type="column")
    return None if np.any(match < 0) else match


def npd_exact(phi: MeasuredSpace, psi: MeasuredSpace) -> tuple[float, Bijection | None]:
    """Exact natural pseudo-distance as a bottleneck assignment.

    The optimum is one of the ``n**2`` costs ``|phi[i] - psi[j]|``, so the
    smallest cost whose threshold graph has a perfect matching is found by
    binary search over the sorted distinct costs.

    Returns ``(INFINITY, None)`` when the sizes differ.
    """
    if len(phi) != len(psi):
        return INFINITY, None
    C = _costs(phi, psi)
    thresholds = np.unique(C)
    lo, hi = 0, len(thresholds) - 1
    best = _perfect_matching(C <= thresholds[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        match = _perfect_matching(C <= thresholds[mid])
        if match is None:
            lo = mid + 1
        else:
            hi, best = mid, match
    h = Bijection(tuple(best.tolist()))
    return npd_functional(h, phi, psi), h


def npd_bruteforce(phi: MeasuredSpace, psi: MeasuredSpace) -> float:
    """Minimum over all ``n!`` bijections; oracle for :func:`npd_exact`."""
    if len(phi) != len(psi):
        return INFINITY
    if len(phi) > MAX_BRUTEFORCE:
        raise TooLarge(len(phi), MAX_BRUTEFORCE, "permutation set")
    C = _costs(phi, psi).tolist()
    return min(max(C[i][k] for i, k in enumerate(p)) for p in itertools.permutations(range(len(phi))))


def npd_sorted(phi: MeasuredSpace, psi: MeasuredSpace) -> float:
    """``max_i |sort(phi)[i] - sort(psi)[i]|``; optimal in one dimension."""
    if len(phi) != len(psi):
        return INFINITY
    return float(np.abs(np.sort(phi.values) - np.sort(psi.values)).max())


def npd_graph_isomorphic(phi: MeasuredSpace, psi: MeasuredSpace, adjacency_x, adjacency_y
                         ) -> tuple[float, Bijection | None]:
    """Natural pseudo-distance restricted to isomorphisms of two graphs.

    A closer finite stand-in for homeomorphisms of triangulated spaces:
    only bijections carrying the edges of ``adjacency_x`` exactly onto the
    edges of ``adjacency_y`` are admissible.  Brute force, ``n <= 8``.
    """
    A = np.asarray(adjacency_x, dtype=bool)
    B = np.asarray(adjacency_y, dtype=bool)
    n = len(phi)
    if A.shape != (n, n) or B.shape != (len(psi), len(psi)):
        raise SizeMismatch("adjacency matrices must match the measured spaces")
    if len(phi) != len(psi):
        return INFINITY, None
    if n > MAX_BRUTEFORCE:
        raise TooLarge(n, MAX_BRUTEFORCE, "permutation set")
    C = _costs(phi, psi).tolist()
    best_value, best = INFINITY, None
    for p in itertools.permutations(range(n)):
        if not np.array_equal(B[np.ix_(p, p)], A):
            continue
        value = max(C[i][k] for i, k in enumerate(p))
        if value < best_value:
            best_value, best = value, Bijection(p)
    return best_value, best
