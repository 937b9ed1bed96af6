"""Piecewise-linear homeomorphisms of [0, 1] in exact rational arithmetic.

The contraction built by :func:`make_contraction` squeezes [0, 1/2] into
[0, 1/4] and fixes the endpoints.  Its positive powers stay at least 1/4
away from the identity in the uniform metric, so no sequence of them can
converge to the identity.  That is the witness which rules out any compact
metric enlargement of the homeomorphism group whose composition passes to
the limit: in such a space some subsequence of powers ``h^(i_r)`` would
have to make the gap powers ``h^(i_(r+1) - i_r)`` converge to the identity.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidHomeomorphism, NotStrictlyIncreasing

Point = tuple[Fraction, Fraction]


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise InvalidHomeomorphism(f"breakpoint coordinate {value!r} must be exact, not a float")
    return Fraction(value)


def _canonical(points: Iterable[Point]) -> tuple[Point, ...]:
    out: list[Point] = []
    for p in points:
        if out and p[0] == out[-1][0]:
            continue
        # drop the middle one of three collinear breakpoints
        while len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (p[0] - x0) == (p[1] - y0) * (x1 - x0):
                out.pop()
            else:
                break
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class PLHomeo:
    """Increasing piecewise-linear bijection of [0, 1] through ``breakpoints``.

    Breakpoints are stored canonically (collinear interior points merged),
    so two maps are equal exactly when their breakpoint tuples are.
    """

    breakpoints: tuple[Point, ...]
    _xs: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((_frac(x), _frac(y)) for x, y in self.breakpoints)
        if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise InvalidHomeomorphism("breakpoints must run from (0, 0) to (1, 1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise InvalidHomeomorphism(f"breakpoints ({x0}, {y0}) and ({x1}, {y1}) are not strictly increasing")
        pts = _canonical(pts)
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "_xs", tuple(x for x, _ in pts))

    @classmethod
    def identity(cls) -> "PLHomeo":
        return cls(((0, 0), (1, 1)))

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return self._xs

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} is outside [0, 1]")
        k = min(max(bisect_right(self._xs, x) - 1, 0), len(self._xs) - 2)
        (x0, y0), (x1, y1) = self.breakpoints[k], self.breakpoints[k + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def inverse(self) -> "PLHomeo":
        return PLHomeo(tuple((y, x) for x, y in self.breakpoints))

    def __matmul__(self, other: "PLHomeo") -> "PLHomeo":
        return compose_pl(self, other)


def invert(f: PLHomeo) -> PLHomeo:
    return f.inverse()


def compose_pl(f: PLHomeo, g: PLHomeo) -> PLHomeo:
    """``f o g`` with breakpoints at g's breakpoints and the g-preimages of f's."""
    g_inv = g.inverse()
    grid = sorted(set(g.xs) | {g_inv(x) for x in f.xs})
    return PLHomeo(tuple((x, f(g(x))) for x in grid))


def power(h: PLHomeo, m: int) -> PLHomeo:
    """``h`` composed with itself ``m`` times (``m >= 1``)."""
    if m < 1:
        raise ValueError(f"power needs m >= 1, got {m}")
    result = h
    for _ in range(m - 1):
        result = compose_pl(h, result)
    return result


def sup_distance(f: PLHomeo, g: PLHomeo) -> Fraction:
    """Uniform distance ``max |f(x) - g(x)|``.

    ``f - g`` is linear between consecutive points of the merged grid, so
    the maximum sits on a grid point and the result is exact.
    """
    return max(abs(f(x) - g(x)) for x in set(f.xs) | set(g.xs))


def make_contraction() -> PLHomeo:
    """``x/2`` on [0, 1/2], then linear from (1/2, 1/4) to (1, 1)."""
    return PLHomeo(((0, 0), (Fraction(1, 2), Fraction(1, 4)), (1, 1)))


@dataclass
class DivergenceReport:
    rows: list[tuple[int, Fraction]]

    @property
    def min_over_m(self) -> Fraction:
        return min(d for _, d in self.rows)

    @property
    def argmin_m(self) -> int:
        return min(self.rows, key=lambda row: (row[1], row[0]))[0]


def divergence_report(h: PLHomeo, max_power: int) -> DivergenceReport:
    """Rows ``(m, sup_distance(h^m, id))`` for ``m = 1 .. max_power``."""
    if max_power < 1:
        raise ValueError(f"max_power must be >= 1, got {max_power}")
    ident = PLHomeo.identity()
    rows = []
    hm = h
    for m in range(1, max_power + 1):
        if m > 1:
            hm = compose_pl(h, hm)
        rows.append((m, sup_distance(hm, ident)))
    return DivergenceReport(rows)


@dataclass
class WalkthroughStep:
    i: int
    cancels: bool  # h^i o (h^-1)^i is exactly the identity
    gap: int | None = None
    gap_distance: Fraction | None = None


@dataclass
class Walkthrough:
    subsequence: tuple[int, ...]
    steps: list[WalkthroughStep]

    @property
    def all_cancel(self) -> bool:
        return all(s.cancels for s in self.steps)

    @property
    def min_gap_distance(self) -> Fraction:
        return min(s.gap_distance for s in self.steps if s.gap is not None)


def proof_walkthrough(h: PLHomeo, subsequence: Sequence[int]) -> Walkthrough:
    """Replay the contradiction argument on the powers ``h^(i_r)``.

    For every ``i_r`` check that ``h^(i_r) o g^(i_r)`` is exactly the
    identity, with ``g`` the inverse of ``h``; the argument then forces the
    gap powers ``h^(i_(r+1) - i_r)`` towards the identity.  Their uniform
    distances from it are recorded so the failure is visible.
    """
    seq = tuple(int(i) for i in subsequence)
    if len(seq) < 2:
        raise NotStrictlyIncreasing("the subsequence needs at least two terms")
    if seq[0] < 1 or any(b <= a for a, b in zip(seq, seq[1:])):
        raise NotStrictlyIncreasing(f"{seq} is not a strictly increasing sequence of positive integers")
    ident = PLHomeo.identity()
    g = h.inverse()
    steps = []
    for r, i in enumerate(seq):
        step = WalkthroughStep(i, compose_pl(power(h, i), power(g, i)) == ident)
        if r + 1 < len(seq):
            step.gap = seq[r + 1] - i
            step.gap_distance = sup_distance(power(h, step.gap), ident)
        steps.append(step)
    return Walkthrough(seq, steps)
