"""Gromov-Hausdorff distance between finite metric spaces.

The cost of a correspondence is half its distortion.  This equals the
smallest possible ``sup d_Z(f(x), g(y))`` over pairs of isometric embeddings
of both spaces into a common metric space: the gluing of ``X`` and ``Y``
along ``rho`` realizes it.
"""

from __future__ import annotations

import numpy as np

from .core import (
    MAX_ENUMERATION_CELLS,
    Correspondence,
    FiniteMetricSpace,
    FunctionalFamily,
)
from .errors import TooLarge


def distortion(rho: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """``max |dX[i, i'] - dY[j, j']|`` over every two pairs ``(i, j), (i', j')`` of ``rho``."""
    rows = np.fromiter((i for i, _ in rho.pairs), dtype=np.intp, count=len(rho))
    cols = np.fromiter((j for _, j in rho.pairs), dtype=np.intp, count=len(rho))
    return float(np.abs(X.dist[np.ix_(rows, rows)] - Y.dist[np.ix_(cols, cols)]).max())


class GromovHausdorffFunctional(FunctionalFamily):
    name = "gh"
    context = "finite metric space"
    context_type = FiniteMetricSpace

    def bind(self, X, Y):
        def evaluate(rho):
            return distortion(rho, X, Y) / 2

        return evaluate

    def distance(self, X, Y) -> float:
        return gh_exact(X, Y)[0]


GROMOV_HAUSDORFF = GromovHausdorffFunctional()


def gh_functional(rho: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    return distortion(rho, X, Y) / 2


def gh_diameter_lower_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    return abs(X.diameter - Y.diameter) / 2


def _cover_search(compatible: list[int], nx: int, ny: int) -> list[int] | None:
    """Find cells forming a correspondence whose members are pairwise compatible.

    Cells are numbered ``i * ny + j``; ``compatible[p]`` is the bitmask of
    cells that may coexist with ``p``.  Any valid correspondence contains a
    cover reachable by repeatedly choosing a partner for some uncovered
    index, so the search is complete.
    """
    all_rows, all_cols = (1 << nx) - 1, (1 << ny) - 1
    failed: set[tuple[int, int, int]] = set()
    chosen: list[int] = []

    def candidates(allowed: int, rows: int, cols: int):
        best = None
        for i in range(nx):
            if rows >> i & 1:
                continue
            cells = [i * ny + j for j in range(ny) if allowed >> (i * ny + j) & 1]
            if best is None or len(cells) < len(best):
                best = cells
        for j in range(ny):
            if cols >> j & 1:
                continue
            cells = [i * ny + j for i in range(nx) if allowed >> (i * ny + j) & 1]
            if best is None or len(cells) < len(best):
                best = cells
        return best

    def search(allowed: int, rows: int, cols: int) -> bool:
        if rows == all_rows and cols == all_cols:
            return True
        state = (allowed, rows, cols)
        if state in failed:
            return False
        for p in candidates(allowed, rows, cols):
            i, j = divmod(p, ny)
            chosen.append(p)
            if search(allowed & compatible[p], rows | 1 << i, cols | 1 << j):
                return True
            chosen.pop()
        failed.add(state)
        return False

    everything = (1 << (nx * ny)) - 1
    return chosen if search(everything, 0, 0) else None


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> tuple[float, Correspondence]:
    """Exact Gromov-Hausdorff distance and a minimizing correspondence.

    The optimal distortion is one of the finitely many values
    ``|dX[i, i'] - dY[j, j']|``; a binary search over them asks whether a
    correspondence exists whose pairs are all mutually within the
    threshold.  Refuses instances with more than
    :data:`~corrdist.core.MAX_ENUMERATION_CELLS` cells.
    """
    nx, ny = len(X), len(Y)
    if nx * ny > MAX_ENUMERATION_CELLS:
        raise TooLarge(nx * ny, MAX_ENUMERATION_CELLS, "correspondence grid")
    # gap[i, j, i', j'] = |dX[i, i'] - dY[j, j']|
    gap = np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :]).reshape(nx * ny, nx * ny)
    thresholds = np.unique(gap)

    def feasible(t: float):
        ok = gap <= t
        weights = 1 << np.arange(nx * ny, dtype=object)
        compatible = [int((weights * row).sum()) for row in ok]
        return _cover_search(compatible, nx, ny)

    lo, hi = 0, len(thresholds) - 1
    best = feasible(thresholds[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        cells = feasible(thresholds[mid])
        if cells is None:
            lo = mid + 1
        else:
            hi, best = mid, cells
    rho = Correspondence._trusted(tuple(sorted(divmod(p, ny) for p in best)), nx, ny)
    return gh_functional(rho, X, Y), rho
