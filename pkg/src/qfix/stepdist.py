"""Finite step functions representing distance distributions.

A distance distribution is a nondecreasing map ``f: [0, inf] -> [0, 1]``
with ``f(t) = sup_{s<t} f(s)``.  Only finitely-stepped ones are
representable here; they are closed under pointwise joins and meets and
under convolution by any t-norm, so every quantale operation on them is
computed exactly.

Layout: ``cuts = (c_1, ..., c_k)`` strictly increasing, finite and positive;
``levels = (v_0, ..., v_k)`` nondecreasing.  The function is ``v_i`` on
``(c_i, c_{i+1}]`` with ``c_0 = 0`` and ``c_{k+1} = inf``, and ``f(0) = 0``.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

__all__ = ["StepDistribution", "LeftContinuityError"]

INF = math.inf


class LeftContinuityError(ValueError):
    """Raised when a pointwise description is not a valid distance distribution."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _as_float(x) -> float:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        raise ValueError(f"not a number: {x!r}")
    return float(x)


@dataclass(frozen=True)
class StepDistribution:
    cuts: tuple = ()
    levels: tuple = (0.0,)

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cuts)
        levels = tuple(float(v) for v in self.levels)
        if len(levels) != len(cuts) + 1:
            raise ValueError("need exactly one more level than cuts")
        for c in cuts:
            if not (0.0 < c < INF):
                raise ValueError(f"cut {c!r} must lie in (0, inf)")
        for a, b in zip(cuts, cuts[1:]):
            if not a < b:
                raise ValueError("cuts must be strictly increasing")
        for v in levels:
            if not (-1e-12 <= v <= 1.0 + 1e-12):
                raise ValueError(f"level {v!r} outside [0, 1]")
        for a, b in zip(levels, levels[1:]):
            if b < a - 1e-12:
                raise ValueError("levels must be nondecreasing")
        levels = tuple(min(1.0, max(0.0, v)) for v in levels)
        # canonical form: no cut separates two equal plateaus
        keep_cuts, keep_levels = [], [levels[0]]
        for c, v in zip(cuts, levels[1:]):
            if v > keep_levels[-1]:
                keep_cuts.append(c)
                keep_levels.append(v)
            else:
                keep_levels[-1] = max(keep_levels[-1], v)
        object.__setattr__(self, "cuts", tuple(keep_cuts))
        object.__setattr__(self, "levels", tuple(keep_levels))

    @classmethod
    def _trusted(cls, cuts: list, levels: list) -> "StepDistribution":
        # internal results: cuts sorted and valid, levels nondecreasing
        keep_cuts, keep_levels = [], [levels[0]]
        for c, v in zip(cuts, levels[1:]):
            if v > keep_levels[-1]:
                keep_cuts.append(c)
                keep_levels.append(v)
        obj = object.__new__(cls)
        object.__setattr__(obj, "cuts", tuple(keep_cuts))
        object.__setattr__(obj, "levels", tuple(keep_levels))
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "StepDistribution":
        return cls((), (0.0,))

    @classmethod
    def unit(cls) -> "StepDistribution":
        """``e``: 0 at t = 0 and 1 everywhere else."""
        return cls((), (1.0,))

    @classmethod
    def constant(cls, value: float) -> "StepDistribution":
        """The "almost constant" function: ``value`` on ``(0, inf]``."""
        return cls((), (value,))

    @classmethod
    def step(cls, b: float, low: float = 0.0, high: float = 1.0) -> "StepDistribution":
        """``low`` on ``(0, b]`` and ``high`` on ``(b, inf]``.

        ``step(0)`` is the unit and ``step(inf)`` the zero function, so this
        doubles as the embedding of a distance ``b`` into distributions.
        """
        b = _as_float(b)
        if b <= 0.0:
            return cls((), (high,))
        if b == INF:
            return cls((), (low,))
        return cls((b,), (low, high))

    @classmethod
    def from_pairs(cls, breakpoints: Sequence, values: Sequence) -> "StepDistribution":
        """Build from right-closed plateau ends, the external encoding.

        ``values[i]`` holds on ``(breakpoints[i-1], breakpoints[i]]``.  The last
        breakpoint must be ``inf``, or one extra trailing value may be given for
        the final plateau up to ``inf``.
        """
        bps = [_as_float(b) for b in breakpoints]
        vals = [float(v) for v in values]
        if len(vals) == len(bps) + 1:
            bps.append(INF)
        if len(vals) != len(bps) or not bps:
            raise ValueError("breakpoints/values length mismatch")
        if bps[-1] != INF:
            raise ValueError("final plateau must extend to inf")
        return cls(tuple(bps[:-1]), tuple(vals))

    @classmethod
    def from_json(cls, obj: dict) -> "StepDistribution":
        return cls.from_pairs(obj["breakpoints"], obj["values"])

    @classmethod
    def from_function(cls, fn: Callable[[float], float], cuts: Iterable[float]) -> "StepDistribution":
        """Read off a step function from pointwise evaluation.

        ``cuts`` must contain every jump of ``fn``.  Raises
        :class:`LeftContinuityError` when ``fn`` is not left-continuous at a
        jump, not nondecreasing, or nonzero at 0.
        """
        cs = sorted({float(c) for c in cuts if 0.0 < float(c) < INF})
        if fn(0.0) != 0.0:
            raise LeftContinuityError("value at 0 must be 0", witness=(0.0, fn(0.0)))
        ends = cs + [INF]
        starts = [0.0] + cs
        levels = []
        for lo, hi in zip(starts, ends):
            inner = lo + 1.0 if hi == INF else 0.5 * (lo + hi)
            v_inner, v_end = fn(inner), fn(hi)
            if hi == INF:
                # no jump allowed at inf: f(inf) = sup_{s<inf} f(s)
                if v_end != v_inner:
                    raise LeftContinuityError("jump at inf", witness=(hi, v_inner, v_end))
            elif v_end != v_inner:
                raise LeftContinuityError(
                    f"not left-continuous at t={hi}", witness=(hi, v_inner, v_end)
                )
            levels.append(float(v_end))
        for (a, b) in zip(levels, levels[1:]):
            if b < a:
                raise LeftContinuityError("not nondecreasing", witness=(a, b))
        return cls(tuple(cs), tuple(levels))

    # -- evaluation ---------------------------------------------------------

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0.0:
            return 0.0
        return self.levels[bisect_left(self.cuts, t)]

    @property
    def at_infinity(self) -> float:
        return self.levels[-1]

    def plateaus(self) -> Iterator[tuple]:
        """Yield ``(start, end, level)`` for each plateau ``(start, end]``."""
        starts = (0.0,) + self.cuts
        ends = self.cuts + (INF,)
        yield from zip(starts, ends, self.levels)

    def to_json(self) -> dict:
        return {
            "breakpoints": list(self.cuts) + ["inf"],
            "values": list(self.levels),
        }

    # -- lattice structure --------------------------------------------------

    def _combine(self, others: Sequence["StepDistribution"], pick) -> "StepDistribution":
        fs = (self, *others)
        cuts = sorted({c for f in fs for c in f.cuts})
        ends = cuts + [INF]
        levels = [pick(f(e) for f in fs) for e in ends]
        return StepDistribution._trusted(cuts, levels)

    def join(self, *others: "StepDistribution") -> "StepDistribution":
        return self._combine(others, max)

    def meet(self, *others: "StepDistribution") -> "StepDistribution":
        # a pointwise min of left-continuous nondecreasing maps is again one
        return self._combine(others, min)

    def convolve(self, other: "StepDistribution", op: Callable[[float, float], float]) -> "StepDistribution":
        """``(f*g)(t) = sup_{r+s=t} op(f(r), g(s))`` computed exactly.

        A pair of plateaus ``i, j`` contributes ``op(v_i, w_j)`` exactly when
        ``t > c_i + d_j``; monotonicity makes the upper plateau ends
        irrelevant, so the result jumps only at sums of cuts.
        """
        a = (0.0,) + self.cuts
        b = (0.0,) + other.cuts
        best: dict = {}
        for ci, vi in zip(a, self.levels):
            for dj, wj in zip(b, other.levels):
                s, v = ci + dj, op(vi, wj)
                if v > best.get(s, -1.0):
                    best[s] = v
        cuts, levels = [], []
        running = 0.0
        for s in sorted(best):
            running = max(running, best[s])
            if s > 0.0:  # the smallest sum is always 0 + 0
                cuts.append(s)
            levels.append(running)
        return StepDistribution._trusted(cuts, levels)

    def residual(self, other: "StepDistribution", implies: Callable[[float, float], float]) -> "StepDistribution":
        """Largest ``x`` with ``self * x <= other`` under the t-norm of ``implies``.

        Pointwise the bound is ``h(t) = inf_s implies(f(s), g(s + t))``; the
        answer is the left-continuous regularisation of ``h``.  ``h`` only
        changes where some cut of ``g`` minus a cut of ``f`` (or 0) equals t.
        """
        f_starts = (0.0,) + self.cuts
        t_cuts = sorted({d - c for d in other.cuts for c in f_starts if d - c > 0.0})

        def h(t: float) -> float:
            pts = sorted({0.0, *self.cuts, *(d - t for d in other.cuts if d - t > 0.0)})
            probes = [0.5 * (a + b) for a, b in zip(pts, pts[1:])] + [pts[-1] + 1.0]
            return min(implies(self(s), other(s + t)) for s in probes)

        ends = t_cuts + [INF]
        starts = [0.0] + t_cuts
        levels, running = [], 0.0
        for lo, hi in zip(starts, ends):
            inner = lo + 1.0 if hi == INF else 0.5 * (lo + hi)
            running = max(running, h(inner))
            levels.append(running)
        return StepDistribution(tuple(t_cuts), tuple(levels))

    def rescale(self, K: float) -> "StepDistribution":
        """``t -> f(K t)``; cuts shrink by the factor ``K``."""
        if not K > 0.0:
            raise ValueError("scale factor must be positive")
        return StepDistribution._trusted([c / K for c in self.cuts], list(self.levels))

    def map_levels(self, fn: Callable[[float], float]) -> "StepDistribution":
        """Apply a nondecreasing ``fn`` to every plateau; ``f(0) = 0`` is kept."""
        return StepDistribution(self.cuts, tuple(fn(v) for v in self.levels))

    # -- comparisons --------------------------------------------------------

    def leq(self, other: "StepDistribution", tol: float = 0.0) -> bool:
        """Pointwise order, tolerant by ``tol`` both in t and in value.

        Checks ``f(t) <= g(t + tol) + tol``.  Because ``g`` is nondecreasing
        it suffices to look just right of each plateau start of ``f``.
        """
        for start, _, level in self.plateaus():
            g_level = other.levels[bisect_right(other.cuts, start + tol)]
            if level > g_level + tol:
                return False
        return True

    def approx_eq(self, other: "StepDistribution", tol: float = 0.0) -> bool:
        return self.leq(other, tol) and other.leq(self, tol)

    def distance(self, other: "StepDistribution") -> float:
        """Uniform distance over ``(0, inf]``."""
        ends = sorted(set(self.cuts) | set(other.cuts)) + [INF]
        return max(abs(self(e) - other(e)) for e in ends)
