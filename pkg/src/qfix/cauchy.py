"""Cauchy degrees of object sequences and the presheaves they induce.

Every sup over ``N`` and inf over a tail is truncated at a horizon ``h``:
``N`` ranges over ``0..h//2`` and tails end at ``h``.  Tail meets only grow
as ``N`` increases, so the truncated degree is the meet over the last half
window ``[h//2, h]``.  The estimate counts as stabilized when the value at
horizon ``h//2`` agrees with the value at ``h`` within the quantale
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .qcat import Distributor, QCategory, check_adjunction, unit_category
from .report import Report

__all__ = [
    "ObjectSequence",
    "CauchyEstimate",
    "cauchy_degree",
    "is_cauchy",
    "phi_of",
    "psi_of",
    "check_cauchy_adjoint_equivalence",
]

DEFAULT_HORIZON = 64


class ObjectSequence:
    """A sequence ``x_0, x_1, ...`` of objects of ``category``.

    ``terms`` is either an explicit list (its length bounds every horizon) or
    a rule ``n -> x_n``.
    """

    def __init__(self, category: QCategory, terms, name: str = ""):
        self.category = category
        self.name = name
        if callable(terms):
            self._rule: Optional[Callable[[int], Any]] = terms
            self._terms = None
        else:
            self._rule = None
            self._terms = tuple(terms)
            if not self._terms:
                raise ValueError("empty sequence")
            for x in self._terms:
                if x not in category:
                    raise ValueError(f"{x!r} is not an object of the category")
        self._cache: dict = {}

    @classmethod
    def constant(cls, category: QCategory, x, name: str = "") -> "ObjectSequence":
        return cls(category, lambda n: x, name=name or f"const({x!r})")

    @classmethod
    def eventually_periodic(cls, category: QCategory, prefix: Sequence, cycle: Sequence, name: str = ""):
        prefix, cycle = tuple(prefix), tuple(cycle)
        if not cycle:
            raise ValueError("cycle must be non-empty")
        for x in prefix + cycle:
            if x not in category:
                raise ValueError(f"{x!r} is not an object of the category")
        p, k = len(prefix), len(cycle)

        def rule(n):
            return prefix[n] if n < p else cycle[(n - p) % k]

        seq = cls(category, rule, name=name)
        seq.prefix, seq.cycle = prefix, cycle
        return seq

    @classmethod
    def orbit(cls, category: QCategory, f: Callable, x0, name: str = "") -> "ObjectSequence":
        """``x_n = f^n(x0)``, memoised so each iterate is computed once."""
        memo = [x0]

        def rule(n):
            while len(memo) <= n:
                memo.append(f(memo[-1]))
            return memo[n]

        return cls(category, rule, name=name)

    @property
    def max_horizon(self) -> Optional[int]:
        return None if self._terms is None else len(self._terms) - 1

    def __getitem__(self, n: int):
        if self._terms is not None:
            return self._terms[n]
        return self._rule(n)

    def terms(self, h: int) -> list:
        return [self[n] for n in range(h + 1)]

    def clamp(self, h: int) -> int:
        m = self.max_horizon
        return h if m is None else min(h, m)


@dataclass
class CauchyEstimate:
    value: Any
    horizon: int
    stabilized: bool
    half_value: Any = None
    window: list = field(default_factory=list)  # tail meets d_N for N = 0..h//2

    def describe(self) -> str:
        flag = "stabilized" if self.stabilized else "not stabilized"
        return f"C_x ~ {self.value!r} at horizon {self.horizon} ({flag})"


class _HomTable:
    """Hom values between sequence terms, computed once per distinct pair."""

    def __init__(self, c: QCategory, terms: list):
        self.c = c
        self.keys = []
        reps: list = []
        lookup: dict = {}
        for x in terms:
            k = None
            try:
                k = lookup.get(x)
            except TypeError:
                for i, r in enumerate(reps):
                    if r == x:
                        k = i
                        break
            if k is None:
                k = len(reps)
                reps.append(x)
                try:
                    lookup[x] = k
                except TypeError:
                    pass
            self.keys.append(k)
        self.reps = reps
        self._vals: dict = {}

    def __call__(self, n: int, m: int):
        key = (self.keys[n], self.keys[m])
        v = self._vals.get(key)
        if v is None:
            v = self.c.hom(self.reps[key[0]], self.reps[key[1]])
            self._vals[key] = v
        return v


def _window_meet(q, homs: _HomTable, lo: int, hi: int):
    seen = set()
    vals = []
    for n in range(lo, hi + 1):
        for m in range(lo, hi + 1):
            key = (homs.keys[n], homs.keys[m])
            if key not in seen:
                seen.add(key)
                vals.append(homs(n, m))
    return q.meet(vals)


def cauchy_degree(x: ObjectSequence, h: int = DEFAULT_HORIZON, window: bool = True) -> CauchyEstimate:
    """Truncated ``C_x = join_N meet_{n,m >= N} C(x_n, x_m)``."""
    if h < 2:
        raise ValueError("horizon must be at least 2")
    h = x.clamp(h)
    if h < 2:
        raise ValueError("sequence too short for a horizon of 2")
    q = x.category.quantale
    terms = x.terms(h)
    homs = _HomTable(x.category, terms)
    value = _window_meet(q, homs, h // 2, h)
    half = _window_meet(q, homs, h // 4, h // 2)
    tails = []
    if window:
        # d_N = meet over [N, h]^2, built from N = h//2 downwards
        acc = value
        row = [None] * (h // 2 + 1)
        row[h // 2] = value
        for n in range(h // 2 - 1, -1, -1):
            acc = q.meet([acc] + [homs(n, m) for m in range(n, h + 1)] + [homs(m, n) for m in range(n + 1, h + 1)])
            row[n] = acc
        tails = row
    return CauchyEstimate(value, h, q.eq(value, half), half, tails)


def is_cauchy(x: ObjectSequence, h: int = DEFAULT_HORIZON):
    """``(unit <= C_x, estimate)``; a positive on an unstabilized estimate is provisional."""
    est = cauchy_degree(x, h)
    q = x.category.quantale
    return q.leq(q.unit, est.value), est


def _tail_supinf(q, values: list):
    h = len(values) - 1
    return q.meet(values[h // 2 :])


def phi_of(x: ObjectSequence, h: int = DEFAULT_HORIZON) -> Distributor:
    """``phi_x(y) = join_N meet_{n >= N} C(y, x_n)`` as a presheaf on the carrier."""
    c = x.category
    h = x.clamp(h)
    q = c.quantale
    terms = x.terms(h)
    one = unit_category(q)
    rows = c.carrier()
    m = tuple((_tail_supinf(q, [c.hom(y, t) for t in terms]),) for y in rows)
    return Distributor(one, c, rows, one.objects, m)


def psi_of(x: ObjectSequence, h: int = DEFAULT_HORIZON) -> Distributor:
    """``psi_x(y) = join_N meet_{n >= N} C(x_n, y)`` as a copresheaf on the carrier."""
    c = x.category
    h = x.clamp(h)
    q = c.quantale
    terms = x.terms(h)
    one = unit_category(q)
    cols = c.carrier()
    m = (tuple(_tail_supinf(q, [c.hom(t, y) for t in terms]) for y in cols),)
    return Distributor(c, one, one.objects, cols, m)


def check_cauchy_adjoint_equivalence(x: ObjectSequence, h: int = DEFAULT_HORIZON) -> Report:
    """Compare the Cauchy test with the adjunction test for ``phi_x -| psi_x``.

    The two must agree.  Disagreement on a stabilized estimate fails the
    report as a library bug; on an unstabilized one it is only noted.
    """
    cauchy, est = is_cauchy(x, h)
    adj = check_adjunction(phi_of(x, h), psi_of(x, h))
    rep = Report(f"cauchy <-> adjunction ({x.name or 'sequence'})")
    rep.note(f"sup-inf truncated at horizon {est.horizon}")
    rep.data.update(
        cauchy=cauchy,
        adjoint=adj.passed,
        estimate=est,
        stabilized=est.stabilized,
        unit_defect=adj.data.get("unit_defect"),
        counit_defect=adj.data.get("counit_defect"),
    )
    if cauchy != adj.passed:
        if est.stabilized:
            rep.fail("library-bug", cauchy, adj.passed, detail="stabilized Cauchy test disagrees with adjunction test")
        else:
            rep.note("disagreement on an unstabilized estimate; increase the horizon")
    elif cauchy and not est.stabilized:
        rep.note("positive is provisional: estimate not stabilized")
    return rep
