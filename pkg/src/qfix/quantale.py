"""Quantales: complete lattices with a monoid product distributing over joins.

Values are plain Python payloads and the :class:`Quantale` object carries the
algebra.  Booleans are the ints 0/1, Lawvere values are floats in
``[0, inf]``, t-norm values are floats in ``[0, 1]``, and distance
distributions are :class:`~qfix.stepdist.StepDistribution` instances.

Every comparison on real payloads is tolerance-aware (``Quantale.tol``,
default :data:`TAU_EQ`).  Note that the Lawvere lattice order is the reverse
of the numeric order, so its join is the numeric minimum.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from functools import reduce
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any, Callable, Iterable, Optional, Sequence

from .report import Report
from .stepdist import StepDistribution

INF = math.inf
TAU_EQ = 1e-9

__all__ = [
    "TAU_EQ",
    "InstanceMismatchError",
    "UnsupportedError",
    "TNorm",
    "PRODUCT",
    "MINIMUM",
    "LUKASIEWICZ",
    "tnorm",
    "Quantale",
    "BooleanQuantale",
    "LawvereQuantale",
    "TNormQuantale",
    "DeltaQuantale",
    "FiniteQuantale",
    "WayBelowWitness",
    "way_below",
    "way_below_bruteforce",
    "check_quantale_axioms",
    "check_quantale_laws_random",
    "SequenceTrial",
    "sup_inf",
    "is_seq_lsc",
]


class InstanceMismatchError(TypeError):
    """A value does not belong to the quantale it was handed to."""


class UnsupportedError(ValueError):
    """The requested operation is not decidable for this instance or carrier."""


# ---------------------------------------------------------------------------
# t-norms


def _bisect_residuum(op, a, b, iterations=60):
    # largest x in [0,1] with op(a, x) <= b; exists by left-continuity
    if op(a, 1.0) <= b:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if op(a, mid) <= b:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class TNorm:
    """A left-continuous t-norm with its residuum.

    ``implies`` may be omitted for user-supplied t-norms; the residuum is then
    found by bisection against ``op``.
    """

    name: str
    op: Callable[[float, float], float]
    implies: Optional[Callable[[float, float], float]] = field(default=None, compare=False)

    def __call__(self, a: float, b: float) -> float:
        return self.op(a, b)

    def residuum(self, a: float, b: float) -> float:
        if self.implies is not None:
            return self.implies(a, b)
        return _bisect_residuum(self.op, a, b)


def _prod_implies(a, b):
    return 1.0 if a <= b else b / a


def _min_implies(a, b):
    return 1.0 if a <= b else b


def _luk_implies(a, b):
    return min(1.0, 1.0 - a + b)


PRODUCT = TNorm("product", lambda a, b: a * b, _prod_implies)
MINIMUM = TNorm("minimum", min, _min_implies)
LUKASIEWICZ = TNorm("lukasiewicz", lambda a, b: max(a + b - 1.0, 0.0), _luk_implies)

_TNORMS = {t.name: t for t in (PRODUCT, MINIMUM, LUKASIEWICZ)}


def tnorm(name: str) -> TNorm:
    try:
        return _TNORMS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown t-norm {name!r}; expected one of {sorted(_TNORMS)}") from None


# ---------------------------------------------------------------------------
# the abstraction


class Quantale(ABC):
    """``(Q, join, tensor, unit)`` with tolerance-aware comparisons."""

    name: str = "quantale"
    is_linear: bool = False
    is_commutative: bool = True

    def __init__(self, tol: float = TAU_EQ):
        self.tol = tol

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    # -- primitives each instance provides --------------------------------
    @abstractmethod
    def validate(self, a: Any) -> Any:
        """Return the normalised payload or raise :class:`InstanceMismatchError`."""

    @abstractmethod
    def _leq(self, a, b) -> bool: ...

    @abstractmethod
    def _join(self, family: list): ...

    @abstractmethod
    def _meet(self, family: list): ...

    @abstractmethod
    def _tensor(self, a, b): ...

    @abstractmethod
    def _residuate(self, a, b): ...

    @property
    @abstractmethod
    def unit(self): ...

    @property
    @abstractmethod
    def bottom(self): ...

    @property
    @abstractmethod
    def top(self): ...

    @abstractmethod
    def random(self, rng: random.Random): ...

    def distance(self, a, b) -> float:
        """A numeric gap used for truncation slack; 0 iff equal."""
        return 0.0 if self.eq(a, b) else INF

    def elements(self) -> Optional[tuple]:
        """The whole carrier when finite, else ``None``."""
        return None

    def sup_below(self, b):
        """``join{x | x < b}``; only meaningful for linear instances."""
        raise UnsupportedError(f"{self.name}: no strict-below supremum available")

    # -- public API ---------------------------------------------------------
    def leq(self, a, b) -> bool:
        return self._leq(self.validate(a), self.validate(b))

    def eq(self, a, b) -> bool:
        a, b = self.validate(a), self.validate(b)
        return self._leq(a, b) and self._leq(b, a)

    def lt(self, a, b) -> bool:
        a, b = self.validate(a), self.validate(b)
        return self._leq(a, b) and not self._leq(b, a)

    def join(self, family: Iterable = ()) -> Any:
        fam = [self.validate(x) for x in family]
        return self._join(fam) if fam else self.bottom

    def meet(self, family: Iterable = ()) -> Any:
        fam = [self.validate(x) for x in family]
        return self._meet(fam) if fam else self.top

    def tensor(self, a, b) -> Any:
        return self._tensor(self.validate(a), self.validate(b))

    def tensor_all(self, *values) -> Any:
        out = self.unit
        for v in values:
            out = self.tensor(out, v)
        return out

    def residuate(self, a, b) -> Any:
        """Right residual: the largest ``x`` with ``tensor(a, x) <= b``."""
        return self._residuate(self.validate(a), self.validate(b))

    def left_residuate(self, a, b) -> Any:
        """Largest ``x`` with ``tensor(x, a) <= b``."""
        if self.is_commutative:
            return self.residuate(a, b)
        raise UnsupportedError(f"{self.name}: left residual not implemented")

    def is_bottom(self, v) -> bool:
        return self.leq(v, self.bottom)

    def above_unit(self, v) -> bool:
        return self.leq(self.unit, v)


class BooleanQuantale(Quantale):
    """``({0,1}, or, and, 1)``; categories over it are preorders."""

    name = "boolean"
    is_linear = True

    def validate(self, a):
        if isinstance(a, StepDistribution) or a not in (0, 1):
            raise InstanceMismatchError(f"{a!r} is not a Boolean value")
        return int(a)

    def _leq(self, a, b):
        return a <= b

    def _join(self, family):
        return max(family)

    def _meet(self, family):
        return min(family)

    def _tensor(self, a, b):
        return a & b

    def _residuate(self, a, b):
        return int((not a) or b)

    unit = property(lambda self: 1)
    bottom = property(lambda self: 0)
    top = property(lambda self: 1)

    def random(self, rng):
        return rng.randint(0, 1)

    def distance(self, a, b):
        return float(abs(self.validate(a) - self.validate(b)))

    def elements(self):
        return (0, 1)

    def sup_below(self, b):
        return 0


def _real_payload(q: Quantale, a) -> float:
    if isinstance(a, (bool, StepDistribution)) or not isinstance(a, (int, float)):
        if isinstance(a, str) and a.strip().lower() in ("inf", "infinity"):
            return INF
        raise InstanceMismatchError(f"{a!r} is not a {q.name} value")
    return float(a)


class LawvereQuantale(Quantale):
    """``([0, inf], inf-numeric, +, 0)``: order reversed, join = numeric min."""

    name = "lawvere"
    is_linear = True

    def validate(self, a):
        x = _real_payload(self, a)
        if math.isnan(x) or x < -self.tol:
            raise InstanceMismatchError(f"{a!r} is not in [0, inf]")
        return max(x, 0.0)

    def _leq(self, a, b):
        # a <= b in the lattice iff a >= b numerically (inf - tol stays inf)
        return a >= b - self.tol

    def _join(self, family):
        return min(family)

    def _meet(self, family):
        return max(family)

    def _tensor(self, a, b):
        return a + b  # inf + x = inf

    def _residuate(self, a, b):
        if a == INF:
            return 0.0
        if b == INF:
            return INF
        return max(b - a, 0.0)

    unit = property(lambda self: 0.0)
    bottom = property(lambda self: INF)
    top = property(lambda self: 0.0)

    def is_bottom(self, v):
        return self.validate(v) == INF

    def random(self, rng):
        r = rng.random()
        if r < 0.08:
            return INF
        if r < 0.16:
            return 0.0
        return rng.uniform(0.0, 10.0)

    def distance(self, a, b):
        a, b = self.validate(a), self.validate(b)
        if a == b:
            return 0.0
        return abs(a - b)

    def sup_below(self, b):
        # join of {x : x numerically > b} is the numeric infimum b (or inf for b = inf)
        return self.validate(b)


class TNormQuantale(Quantale):
    """``([0,1], max, *, 1)`` for a left-continuous t-norm ``*``."""

    is_linear = True

    def __init__(self, t: TNorm = PRODUCT, tol: float = TAU_EQ):
        super().__init__(tol)
        self.tnorm = t
        self.name = f"tnorm:{t.name}"

    def validate(self, a):
        x = _real_payload(self, a)
        if not (-self.tol <= x <= 1.0 + self.tol):
            raise InstanceMismatchError(f"{a!r} is not in [0, 1]")
        return min(1.0, max(0.0, x))

    def _leq(self, a, b):
        return a <= b + self.tol

    def _join(self, family):
        return max(family)

    def _meet(self, family):
        return min(family)

    def _tensor(self, a, b):
        return self.tnorm(a, b)

    def _residuate(self, a, b):
        return self.tnorm.residuum(a, b)

    unit = property(lambda self: 1.0)
    bottom = property(lambda self: 0.0)
    top = property(lambda self: 1.0)

    def random(self, rng):
        r = rng.random()
        if r < 0.08:
            return 0.0
        if r < 0.16:
            return 1.0
        return rng.random()

    def distance(self, a, b):
        return abs(self.validate(a) - self.validate(b))

    def sup_below(self, b):
        return self.validate(b)


class DeltaQuantale(Quantale):
    """Distance distributions under pointwise join and t-norm convolution.

    Equality and order on distributions are tolerant in both the argument and
    the value by ``tol``, so breakpoints that differ by rounding compare equal.
    """

    def __init__(self, t: TNorm = MINIMUM, tol: float = TAU_EQ):
        super().__init__(tol)
        self.tnorm = t
        self.name = f"delta:{t.name}"

    def validate(self, a):
        if not isinstance(a, StepDistribution):
            raise InstanceMismatchError(f"{a!r} is not a distance distribution")
        return a

    def _leq(self, a, b):
        return a.leq(b, self.tol)

    # pairwise reduction keeps intermediate results small for long families
    def _join(self, family):
        return reduce(StepDistribution.join, family)

    def _meet(self, family):
        return reduce(StepDistribution.meet, family)

    def _tensor(self, a, b):
        return a.convolve(b, self.tnorm.op)

    def _residuate(self, a, b):
        return a.residual(b, self.tnorm.residuum)

    unit = property(lambda self: StepDistribution.unit())
    bottom = property(lambda self: StepDistribution.zero())
    top = property(lambda self: StepDistribution.unit())

    def random(self, rng, max_cuts: int = 3, grid: float = 1 / 64, span: float = 4.0):
        r = rng.random()
        if r < 0.05:
            return StepDistribution.zero()
        if r < 0.10:
            return StepDistribution.unit()
        k = rng.randint(0, max_cuts)
        slots = rng.sample(range(1, int(span / grid) + 1), k)
        cuts = sorted(s * grid for s in slots)
        levels = sorted(rng.random() for _ in range(k + 1))
        return StepDistribution(tuple(cuts), tuple(levels))

    def distance(self, a, b):
        return self.validate(a).distance(self.validate(b))

    def in_delta_plus(self, u: StepDistribution) -> bool:
        """Membership in ``{u | u(inf) = 1} + {0}``."""
        u = self.validate(u)
        return abs(u.at_infinity - 1.0) <= self.tol or self.is_bottom(u)


class FiniteQuantale(Quantale):
    """A user-declared finite lattice, optionally with a tensor table.

    ``order`` is a callable ``leq(a, b)`` or a square 0/1 matrix indexed like
    ``elements``.  Without a tensor the binary meet is used (a frame when the
    lattice is distributive), with the top as unit.
    """

    def __init__(
        self,
        elements: Sequence,
        order,
        tensor=None,
        unit=None,
        name: str = "finite",
        tol: float = TAU_EQ,
    ):
        super().__init__(tol)
        self._elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self._elements)}
        n = len(self._elements)
        if callable(order):
            rel = [[bool(order(a, b)) for b in self._elements] for a in self._elements]
        else:
            rel = [[bool(order[i][j]) for j in range(n)] for i in range(n)]
        self._rel = rel
        self.name = name
        for i in range(n):
            if not rel[i][i]:
                raise ValueError(f"order not reflexive at {self._elements[i]!r}")
        self.is_linear = all(rel[i][j] or rel[j][i] for i in range(n) for j in range(n))
        self._bottom = self._glb(self._elements)
        self._top = self._lub(self._elements)
        if self._bottom is None or self._top is None:
            raise ValueError("finite lattice needs a bottom and a top")
        for a, b in product(self._elements, repeat=2):
            if self._lub([a, b]) is None or self._glb([a, b]) is None:
                raise ValueError(f"no join/meet for {a!r}, {b!r}: not a lattice")
        if tensor is None:
            self._table = None
            self.is_commutative = True
        elif callable(tensor):
            self._table = {(a, b): tensor(a, b) for a, b in product(self._elements, repeat=2)}
        else:
            self._table = dict(tensor)
        if self._table is not None:
            self.is_commutative = all(
                self._table[(a, b)] == self._table[(b, a)] for a, b in product(self._elements, repeat=2)
            )
        self._unit = self._top if unit is None else unit

    def _r(self, a, b):
        return self._rel[self._index[a]][self._index[b]]

    def _extremum(self, family, upper):
        # least upper bound of ``family`` (upper=True) among all elements, or greatest lower bound
        if upper:
            cands = [u for u in self._elements if all(self._r(x, u) for x in family)]
            best = [u for u in cands if all(self._r(u, v) for v in cands)]
        else:
            cands = [u for u in self._elements if all(self._r(u, x) for x in family)]
            best = [u for u in cands if all(self._r(v, u) for v in cands)]
        return best[0] if best else None

    def _lub(self, family):
        return self._extremum(family, upper=True)

    def _glb(self, family):
        return self._extremum(family, upper=False)

    def validate(self, a):
        try:
            known = not isinstance(a, StepDistribution) and a in self._index
        except TypeError:
            known = False
        if not known:
            raise InstanceMismatchError(f"{a!r} is not an element of {self.name}")
        return a

    def _leq(self, a, b):
        return self._r(a, b)

    def _join(self, family):
        return self._lub(family)

    def _meet(self, family):
        return self._glb(family)

    def _tensor(self, a, b):
        if self._table is None:
            return self._glb([a, b])
        return self._table[(a, b)]

    def _residuate(self, a, b):
        return self._lub([x for x in self._elements if self._r(self._tensor(a, x), b)])

    def left_residuate(self, a, b):
        a, b = self.validate(a), self.validate(b)
        return self._lub([x for x in self._elements if self._r(self._tensor(x, a), b)])

    unit = property(lambda self: self._unit)
    bottom = property(lambda self: self._bottom)
    top = property(lambda self: self._top)

    def random(self, rng):
        return rng.choice(self._elements)

    def elements(self):
        return self._elements

    def sup_below(self, b):
        b = self.validate(b)
        return self._lub([x for x in self._elements if self._r(x, b) and x != b])

    @classmethod
    def chain(cls, elements: Sequence, name: str = "chain") -> "FiniteQuantale":
        """Totally ordered by position in ``elements`` (first = bottom)."""
        pos = {e: i for i, e in enumerate(elements)}
        return cls(elements, lambda a, b: pos[a] <= pos[b], name=name)


# ---------------------------------------------------------------------------
# way-below


@dataclass(frozen=True)
class WayBelowWitness:
    a: Any
    b: Any
    holds: bool
    rationale: str  # zero-case | strict-below | isolated-equal | refuted


def _way_below_linear(q: Quantale, a, b) -> WayBelowWitness:
    # complete chains: a << b iff a = 0, or a < b, or (a = b and b != sup{x < b})
    if q.is_bottom(a):
        return WayBelowWitness(a, b, True, "zero-case")
    if q.lt(a, b):
        return WayBelowWitness(a, b, True, "strict-below")
    if q.eq(a, b) and not q.eq(b, q.sup_below(b)):
        return WayBelowWitness(a, b, True, "isolated-equal")
    return WayBelowWitness(a, b, False, "refuted")


def way_below_bruteforce(q: Quantale, a, b) -> WayBelowWitness:
    """Decide ``a << b`` by enumerating every directed subset of a finite carrier."""
    carrier = q.elements()
    if carrier is None:
        raise UnsupportedError(f"{q.name}: carrier is not finite")
    a, b = q.validate(a), q.validate(b)
    holds = True
    for size in range(1, len(carrier) + 1):
        for D in combinations(carrier, size):
            directed = all(
                any(q.leq(q.join([x, y]), z) for z in D) for x in D for y in D
            )
            if not directed:
                continue
            if q.leq(b, q.join(D)) and not any(q.leq(a, d) for d in D):
                holds = False
                break
        if not holds:
            break
    if not holds:
        rationale = "refuted"
    elif q.is_bottom(a):
        rationale = "zero-case"
    elif q.eq(a, b):
        rationale = "isolated-equal"
    else:
        rationale = "strict-below"
    return WayBelowWitness(a, b, holds, rationale)


def way_below(q: Quantale, a, b) -> WayBelowWitness:
    """``a << b``: linear instances use the chain characterisation, finite
    lattices the directed-subset enumeration.  Distance distributions are
    unsupported since continuity of their finitary part is an open problem.
    """
    if isinstance(q, DeltaQuantale):
        raise UnsupportedError("way-below is not decided for distance distributions")
    if q.is_linear:
        return _way_below_linear(q, a, b)
    if q.elements() is not None:
        return way_below_bruteforce(q, a, b)
    raise UnsupportedError(f"{q.name}: way-below needs a linear or finite lattice")


# ---------------------------------------------------------------------------
# law checks


def _subfamilies(sample, max_size=None):
    n = len(sample)
    top = n if max_size is None else min(n, max_size)
    for k in range(top + 1):
        yield from combinations(sample, k)


def check_quantale_axioms(q: Quantale, sample: Optional[Sequence] = None, max_exhaustive: int = 10) -> Report:
    """Verify order, lattice, monoid and distributivity laws on ``sample``.

    Defaults to the whole carrier for finite instances.  Joins are taken over
    every subfamily when the sample has at most ``max_exhaustive`` elements,
    and over subfamilies of size <= 3 otherwise.
    """
    if sample is None:
        sample = q.elements()
        if sample is None:
            raise ValueError(f"{q.name}: an explicit sample is required")
    sample = [q.validate(s) for s in sample]
    rep = Report(f"quantale axioms ({q.name})")
    if q.elements() is not None and len(set(map(repr, sample))) == len(q.elements()):
        rep.note("exhaustive over the finite carrier")
    else:
        rep.note("arbitrary joins checked only over finite subfamilies of the sample")
    u = q.unit

    for a in sample:
        if not q.leq(a, a):
            rep.fail("reflexivity", a)
        if not q.eq(q.tensor(u, a), a):
            rep.fail("left-unit", a, detail=f"1*a = {q.tensor(u, a)!r}")
        if not q.eq(q.tensor(a, u), a):
            rep.fail("right-unit", a, detail=f"a*1 = {q.tensor(a, u)!r}")
        if not q.leq(q.bottom, a) or not q.leq(a, q.top):
            rep.fail("bounds", a)
    for a, b in product(sample, repeat=2):
        if q.leq(a, b) and q.leq(b, a) and not q.eq(a, b):
            rep.fail("antisymmetry", a, b)
    for a, b, c in product(sample, repeat=3):
        if q.leq(a, b) and q.leq(b, c) and not q.leq(a, c):
            rep.fail("transitivity", a, b, c)
        lhs = q.tensor(a, q.tensor(b, c))
        rhs = q.tensor(q.tensor(a, b), c)
        if not q.eq(lhs, rhs):
            rep.fail("associativity", a, b, c, detail=f"{lhs!r} != {rhs!r}")

    limit = None if len(sample) <= max_exhaustive else 3
    for S in _subfamilies(sample, limit):
        j, m = q.join(S), q.meet(S)
        for s in S:
            if not q.leq(s, j):
                rep.fail("join-upper-bound", S, s)
            if not q.leq(m, s):
                rep.fail("meet-lower-bound", S, s)
        for ub in sample:
            if all(q.leq(s, ub) for s in S) and not q.leq(j, ub):
                rep.fail("join-least", S, ub)
            if all(q.leq(ub, s) for s in S) and not q.leq(ub, m):
                rep.fail("meet-greatest", S, ub)
        for a in sample:
            left = q.tensor(a, j)
            right = q.join([q.tensor(a, s) for s in S])
            if not q.eq(left, right):
                rep.fail("left-distributivity", a, S, detail=f"{left!r} != {right!r}")
            left = q.tensor(j, a)
            right = q.join([q.tensor(s, a) for s in S])
            if not q.eq(left, right):
                rep.fail("right-distributivity", a, S, detail=f"{left!r} != {right!r}")
    return rep


def check_quantale_laws_random(q: Quantale, trials: int = 10_000, seed: int = 0, max_family: int = 4) -> Report:
    """Random-sample associativity, unit and distributivity checks."""
    rng = random.Random(seed)
    rep = Report(f"random quantale laws ({q.name}, {trials} trials, seed {seed})")
    rep.note("arbitrary joins checked only over random finite families")
    u = q.unit
    for _ in range(trials):
        a, b, c = q.random(rng), q.random(rng), q.random(rng)
        if not q.eq(q.tensor(a, q.tensor(b, c)), q.tensor(q.tensor(a, b), c)):
            rep.fail("associativity", a, b, c)
        if not (q.eq(q.tensor(u, a), a) and q.eq(q.tensor(a, u), a)):
            rep.fail("unit", a)
        S = [q.random(rng) for _ in range(rng.randint(0, max_family))]
        j = q.join(S)
        if not q.eq(q.tensor(a, j), q.join([q.tensor(a, s) for s in S])):
            rep.fail("left-distributivity", a, tuple(S))
        if not q.eq(q.tensor(j, a), q.join([q.tensor(s, a) for s in S])):
            rep.fail("right-distributivity", a, tuple(S))
    rep.data["trials"] = trials
    return rep


# ---------------------------------------------------------------------------
# sequential lower-semicontinuity


def sup_inf(q: Quantale, values: Sequence) -> Any:
    """Horizon-truncated ``join_N meet_{n >= N} t_n`` over ``t_0..t_h``.

    ``N`` runs only up to ``h // 2`` so every inner meet sees at least half
    the window; letting ``N`` reach ``h`` would collapse the tail to a single
    term.
    """
    h = len(values) - 1
    if h < 1:
        raise ValueError("need at least two terms")
    suffix = [None] * (h + 1)
    acc = q.top
    for n in range(h, -1, -1):
        acc = q.meet([acc, values[n]])
        suffix[n] = acc
    return q.join(suffix[: h // 2 + 1])


@dataclass(frozen=True)
class SequenceTrial:
    """A test sequence for :func:`is_seq_lsc`.

    ``terms`` is a list or ``n -> t_n``.  ``limit`` is the exact
    ``sup_N inf_{n>=N} t_n`` when known in closed form; otherwise the
    truncated estimate is used, which cannot expose a jump at the limit.
    """

    terms: Any
    limit: Any = None
    name: str = ""

    def prefix(self, horizon: int) -> list:
        if callable(self.terms):
            return [self.terms(n) for n in range(horizon + 1)]
        vals = list(self.terms)
        if len(vals) < horizon + 1:
            vals += [vals[-1]] * (horizon + 1 - len(vals))
        return vals[: horizon + 1]


def is_seq_lsc(q: Quantale, phi: Callable, trials: Iterable, horizon: int = 64) -> Report:
    """Falsify sequential lower-semicontinuity of ``phi`` on sampled sequences.

    Each trial checks ``phi(liminf t_n) <= liminf phi(t_n)``.  The right side
    is truncated at ``horizon``; its drift between ``horizon // 2`` and
    ``horizon`` (doubled) is allowed as slack, so a reported failure exceeds
    the truncation error.  A pass is evidence only.
    """
    rep = Report(f"sequential lower-semicontinuity ({q.name})")
    rep.note(f"sampled falsifier; sup-inf truncated at horizon {horizon}")
    rows = []
    for i, trial in enumerate(trials):
        if not isinstance(trial, SequenceTrial):
            trial = SequenceTrial(trial)
        ts = [q.validate(t) for t in trial.prefix(horizon)]
        lim = sup_inf(q, ts) if trial.limit is None else q.validate(trial.limit)
        lhs = phi(lim)
        images = [phi(t) for t in ts]
        rhs = sup_inf(q, images)
        rhs_half = sup_inf(q, images[: horizon // 2 + 1])
        slack = 2.0 * q.distance(rhs, rhs_half) + q.tol
        gap = q.distance(rhs, q.join([lhs, rhs]))
        ok = q.leq(lhs, rhs) or gap <= slack
        rows.append({"trial": trial.name or i, "lhs": lhs, "rhs": rhs, "slack": slack, "ok": ok})
        if not ok:
            rep.fail("seq-lsc", trial.name or i, lim, detail=f"phi(liminf)={lhs!r} > liminf phi={rhs!r}")
    rep.data["trials"] = rows
    return rep
