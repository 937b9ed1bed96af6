"""Discrete Fréchet distance between polygonal curves.

Morphisms are monotone couplings: index walks from ``(0, 0)`` to
``(m - 1, n - 1)`` advancing one or both indices per step.  They are a
proper subset of all correspondences between the vertex sets.  Distances
are taken in R^n only; the curve parameter does not participate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import Correspondence, FunctionalFamily
from .errors import DimensionMismatch, InvalidCoupling, TooLarge, ValidationError

#: enumerate_couplings refuses ``m + n`` above this
MAX_COUPLING_LENGTH = 14

_STEPS = ((0, 1), (1, 0), (1, 1))


class PolygonalCurve:
    """Ordered vertices of a polygonal curve in R^n."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] == 0:
            raise ValidationError(f"curve needs a nonempty list of vertices, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("curve has non-finite coordinates")
        v.setflags(write=False)
        self.vertices = v

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolygonalCurve):
            return NotImplemented
        return np.array_equal(self.vertices, other.vertices)

    __hash__ = None

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __repr__(self) -> str:
        return f"PolygonalCurve(m={len(self)}, dim={self.dim})"


@dataclass(frozen=True, order=True)
class MonotoneCoupling:
    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        steps = tuple((int(i), int(j)) for i, j in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps or steps[0] != (0, 0):
            raise InvalidCoupling("a coupling must start at (0, 0)")
        for (i0, j0), (i1, j1) in zip(steps, steps[1:]):
            if (i1 - i0, j1 - j0) not in _STEPS:
                raise InvalidCoupling(f"illegal step from ({i0}, {j0}) to ({i1}, {j1})")

    @property
    def shape(self) -> tuple[int, int]:
        i, j = self.steps[-1]
        return i + 1, j + 1

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def as_correspondence(self) -> Correspondence:
        m, n = self.shape
        return Correspondence._trusted(tuple(sorted(self.steps)), m, n)

    def inverse(self) -> "MonotoneCoupling":
        return MonotoneCoupling._trusted(tuple((j, i) for i, j in self.steps))

    @classmethod
    def _trusted(cls, steps) -> "MonotoneCoupling":
        obj = object.__new__(cls)
        object.__setattr__(obj, "steps", steps)
        return obj

    @classmethod
    def diagonal(cls, n: int) -> "MonotoneCoupling":
        return cls._trusted(tuple((i, i) for i in range(n)))


def _check_coupling(c: MonotoneCoupling, m: int, n: int) -> None:
    if c.shape != (m, n):
        raise InvalidCoupling(f"coupling ends at {c.steps[-1]}, curves have {m} and {n} vertices")


def vertex_distances(P: PolygonalCurve, Q: PolygonalCurve) -> np.ndarray:
    if P.dim != Q.dim:
        raise DimensionMismatch(f"curves in R^{P.dim} and R^{Q.dim}")
    diff = P.vertices[:, None, :] - Q.vertices[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def splice(c1: MonotoneCoupling, c2: MonotoneCoupling) -> MonotoneCoupling:
    """A coupling P->R contained in the relational composite of ``c1`` (P->Q) and ``c2`` (Q->R).

    Both walks advance in lockstep along the shared middle index; whenever
    one of them can move without changing it, that one moves alone.
    """
    if c1.shape[1] != c2.shape[0]:
        raise InvalidCoupling(f"cannot splice couplings of shapes {c1.shape} and {c2.shape}")
    a, b = c1.steps, c2.steps
    s = t = 0
    out = [(a[0][0], b[0][1])]
    while s < len(a) - 1 or t < len(b) - 1:
        if s < len(a) - 1 and a[s + 1][1] == a[s][1]:
            s += 1
        elif t < len(b) - 1 and b[t + 1][0] == b[t][0]:
            t += 1
        else:
            s += 1
            t += 1
        pair = (a[s][0], b[t][1])
        if pair != out[-1]:
            out.append(pair)
    return MonotoneCoupling._trusted(tuple(out))


class FrechetFunctional(FunctionalFamily):
    """``F(c) = max over (i, j) in c of |P[i] - Q[j]|``, over monotone couplings."""

    name = "frechet"
    context = "polygonal curve"
    context_type = PolygonalCurve

    def bind(self, X, Y):
        D = vertex_distances(X, Y).tolist()
        m, n = len(X), len(Y)

        def evaluate(c):
            _check_coupling(c, m, n)
            return max(D[i][j] for i, j in c.steps)

        return evaluate

    def identity(self, X):
        return MonotoneCoupling.diagonal(len(X))

    def invert(self, c):
        return c.inverse()

    def compose(self, rho, sigma):
        return splice(rho, sigma)

    def morphisms(self, X, Y) -> Iterator[MonotoneCoupling]:
        return enumerate_couplings(len(X), len(Y))

    def sample(self, X, Y, rng):
        m, n = len(X), len(Y)
        i = j = 0
        steps = [(0, 0)]
        while (i, j) != (m - 1, n - 1):
            moves = [(di, dj) for di, dj in _STEPS if i + di < m and j + dj < n]
            di, dj = moves[int(rng.integers(len(moves)))]
            i, j = i + di, j + dj
            steps.append((i, j))
        return MonotoneCoupling._trusted(tuple(steps))

    def distance(self, X, Y) -> float:
        return discrete_frechet(X, Y)


FRECHET = FrechetFunctional()


def frechet_functional(c: MonotoneCoupling, P: PolygonalCurve, Q: PolygonalCurve) -> float:
    return FRECHET(c, P, Q)


def _dp(D: np.ndarray) -> np.ndarray:
    m, n = D.shape
    R = np.empty_like(D)
    R[0, 0] = D[0, 0]
    for i in range(1, m):
        R[i, 0] = max(R[i - 1, 0], D[i, 0])
    for j in range(1, n):
        R[0, j] = max(R[0, j - 1], D[0, j])
    for i in range(1, m):
        for j in range(1, n):
            R[i, j] = max(D[i, j], min(R[i - 1, j], R[i, j - 1], R[i - 1, j - 1]))
    return R


def discrete_frechet(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    """Discrete Fréchet distance by the Eiter-Mannila recurrence.

    >>> discrete_frechet(PolygonalCurve([[0, 0], [1, 0]]), PolygonalCurve([[0, 1], [1, 1]]))
    1.0
    """
    return float(_dp(vertex_distances(P, Q))[-1, -1])


def optimal_coupling(P: PolygonalCurve, Q: PolygonalCurve) -> tuple[float, MonotoneCoupling]:
    """The distance and the lexicographically smallest coupling attaining it."""
    D = vertex_distances(P, Q)
    value = _dp(D)[-1, -1]
    m, n = D.shape
    usable = D <= value
    # reach[i, j]: the end is reachable from (i, j) through usable cells
    reach = np.zeros_like(usable)
    reach[-1, -1] = usable[-1, -1]
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            if (i, j) == (m - 1, n - 1) or not usable[i, j]:
                continue
            reach[i, j] = any(
                i + di < m and j + dj < n and reach[i + di, j + dj] for di, dj in _STEPS
            )
    steps = [(0, 0)]
    i = j = 0
    while (i, j) != (m - 1, n - 1):
        # (i, j+1) < (i+1, j) < (i+1, j+1) lexicographically
        for di, dj in _STEPS:
            if i + di < m and j + dj < n and reach[i + di, j + dj]:
                i, j = i + di, j + dj
                break
        steps.append((i, j))
    return float(value), MonotoneCoupling._trusted(tuple(steps))


def enumerate_couplings(m: int, n: int) -> Iterator[MonotoneCoupling]:
    """Every monotone coupling of an ``m``- and an ``n``-vertex curve, each once.

    The count is the Delannoy number ``D(m - 1, n - 1)``.
    """
    if m < 1 or n < 1:
        raise ValidationError(f"curves need at least one vertex, got {m} and {n}")
    if m + n > MAX_COUPLING_LENGTH:
        raise TooLarge(m + n, MAX_COUPLING_LENGTH, "coupling grid")

    def walk(path):
        i, j = path[-1]
        if (i, j) == (m - 1, n - 1):
            yield MonotoneCoupling._trusted(tuple(path))
            return
        for di, dj in _STEPS:
            if i + di < m and j + dj < n:
                path.append((i + di, j + dj))
                yield from walk(path)
                path.pop()

    return walk([(0, 0)])
