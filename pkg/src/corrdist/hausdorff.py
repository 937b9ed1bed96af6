"""Hausdorff distance between finite subsets of a common ambient space."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import (
    Correspondence,
    FiniteMetricSpace,
    FunctionalFamily,
    enumerate_correspondences,
    inf_functional,
)
from .errors import DimensionMismatch, IndexOutOfRange, ValidationError


class AmbientSubset:
    """A nonempty finite subset of an ambient metric space.

    Either give ``points`` (rows are coordinates in R^n, Euclidean norm) or
    give ``ambient`` together with ``indices`` selecting points of a shared
    :class:`FiniteMetricSpace`.
    """

    __slots__ = ("points", "ambient", "indices")

    def __init__(self, points=None, *, ambient: FiniteMetricSpace | None = None,
                 indices: Sequence[int] | None = None):
        if (points is None) == (ambient is None):
            raise ValidationError("give either coordinates or an ambient space with indices")
        if points is not None:
            p = np.array(points, dtype=float)
            if p.ndim == 1:
                p = p[:, None]
            if p.ndim != 2 or p.shape[0] == 0:
                raise ValidationError(f"points must be a nonempty list of vectors, got shape {p.shape}")
            if not np.all(np.isfinite(p)):
                raise ValidationError("points contain non-finite coordinates")
            p.setflags(write=False)
            self.points, self.ambient, self.indices = p, None, None
        else:
            idx = tuple(int(i) for i in (indices if indices is not None else range(len(ambient))))
            if not idx:
                raise ValidationError("subset must be nonempty")
            for i in idx:
                if not 0 <= i < len(ambient):
                    raise IndexOutOfRange(f"index {i} outside ambient space of size {len(ambient)}")
            self.points, self.ambient, self.indices = None, ambient, idx

    def __len__(self) -> int:
        return len(self.indices) if self.points is None else self.points.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AmbientSubset):
            return NotImplemented
        if self.points is not None:
            return other.points is not None and np.array_equal(self.points, other.points)
        return other.ambient == self.ambient and other.indices == self.indices

    __hash__ = None

    @property
    def dim(self) -> int | None:
        return None if self.points is None else self.points.shape[1]

    def __repr__(self) -> str:
        return f"AmbientSubset(n={len(self)}, dim={self.dim})"


def ambient_distances(X: AmbientSubset, Y: AmbientSubset) -> np.ndarray:
    """Matrix of ambient distances ``d(X[i], Y[j])``.

    Every Hausdorff route goes through this function, so the correspondence
    minimum and the closed form see bit-identical distances.
    """
    if X.points is not None and Y.points is not None:
        if X.dim != Y.dim:
            raise DimensionMismatch(f"points of dimension {X.dim} and {Y.dim}")
        diff = X.points[:, None, :] - Y.points[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))
    if X.ambient is not None and Y.ambient is not None:
        if X.ambient is not Y.ambient and X.ambient != Y.ambient:
            raise DimensionMismatch("subsets live in different ambient spaces")
        return X.ambient.dist[np.ix_(X.indices, Y.indices)]
    raise DimensionMismatch("cannot mix coordinate and ambient-index subsets")


class HausdorffFunctional(FunctionalFamily):
    """``F(rho) = max over (x, y) in rho of d(x, y)``, over all correspondences."""

    name = "hausdorff"
    context = "ambient subset"
    context_type = AmbientSubset

    def bind(self, X, Y):
        D = ambient_distances(X, Y).tolist()
        return lambda rho: max(D[i][j] for i, j in rho.pairs)

    def distance(self, X, Y) -> float:
        return hausdorff_closed_form(X, Y)


HAUSDORFF = HausdorffFunctional()


def hausdorff_functional(rho: Correspondence, X: AmbientSubset, Y: AmbientSubset) -> float:
    return HAUSDORFF(rho, X, Y)


def hausdorff_closed_form(X: AmbientSubset, Y: AmbientSubset) -> float:
    """``max(max_x min_y d(x, y), max_y min_x d(x, y))``.

    >>> hausdorff_closed_form(AmbientSubset([0, 2]), AmbientSubset([0, 1]))
    1.0
    """
    D = ambient_distances(X, Y)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def hausdorff_via_correspondences(X: AmbientSubset, Y: AmbientSubset,
                                  threads: int = 1) -> tuple[float, Correspondence]:
    """Minimum of :func:`hausdorff_functional` over every correspondence."""
    return inf_functional(X, Y, HAUSDORFF, enumerate_correspondences(len(X), len(Y)), threads=threads)
