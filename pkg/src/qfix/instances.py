"""Ready-made spaces, control functions and named fixtures.

Constructors build Q-categories over the four example quantales: ordered
sets (Boolean), generalized metric spaces (Lawvere), fuzzy orders (t-norms)
and probabilistic metric spaces (distance distributions).  The fixture
registry at the bottom is what the ``demo`` command and the acceptance
suite run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Optional, Sequence

from .contraction import ControlFunction, check_control
from .qcat import QCategory
from .quantale import (
    INF,
    BooleanQuantale,
    DeltaQuantale,
    FiniteQuantale,
    LawvereQuantale,
    Quantale,
    TNorm,
    TNormQuantale,
    tnorm as tnorm_by_name,
)
from .report import Report
from .stepdist import StepDistribution

__all__ = [
    "BOOLEAN",
    "LAWVERE",
    "make_ordered_set",
    "make_metric_space",
    "make_fuzzy_order",
    "make_pm_space",
    "embed_metric",
    "transitive_closure",
    "banach_control",
    "boyd_wong_control",
    "power_control",
    "identity_control",
    "delta_affine_control",
    "delta_banach_control",
    "boolean_control_functions",
    "delta_plus_fixpoint_scan",
    "random_delta_plus",
    "NamedFixture",
    "FIXTURES",
    "get_fixture",
    "finite_fixtures",
    "finite_lattices",
    "DELTA_PLUS_SEED",
]

BOOLEAN = BooleanQuantale()
LAWVERE = LawvereQuantale()

DELTA_PLUS_SEED = 20240601


def _as_tnorm(t) -> TNorm:
    return tnorm_by_name(t) if isinstance(t, str) else t


def _tnorm_quantale(t) -> TNormQuantale:
    return t if isinstance(t, TNormQuantale) else TNormQuantale(_as_tnorm(t))


def _delta_quantale(t) -> DeltaQuantale:
    return t if isinstance(t, DeltaQuantale) else DeltaQuantale(_as_tnorm(t))


def _labels(n: int, objects) -> tuple:
    return tuple(range(n)) if objects is None else tuple(objects)


# ---------------------------------------------------------------------------
# spaces


def make_ordered_set(relation: Sequence[Sequence], objects: Optional[Sequence] = None, name: str = "poset") -> QCategory:
    """An ordered set as a Boolean category; ``relation[i][j]`` is ``i <= j``."""
    objs = _labels(len(relation), objects)
    m = [[1 if v else 0 for v in row] for row in relation]
    return QCategory.finite(BOOLEAN, objs, m, name=name)


def make_metric_space(
    points: Sequence,
    distance,
    *,
    continuum: bool = False,
    search_hint: Optional[Sequence] = None,
    name: str = "metric",
) -> QCategory:
    """A generalized metric space (no symmetry or separation required).

    ``distance`` is a square matrix over ``points`` or a function ``d(x, y)``.
    With ``continuum=True`` the function is used as a hom rule on any
    objects and ``points`` become the probe set for sampled checks.
    """
    if continuum:
        if not callable(distance):
            raise ValueError("a continuum space needs a distance function")
        return QCategory.from_rule(LAWVERE, distance, probes=points, search_hint=search_hint, name=name)
    if callable(distance):
        m = [[distance(x, y) for y in points] for x in points]
    else:
        m = distance
    return QCategory.finite(LAWVERE, points, m, name=name)


def make_fuzzy_order(
    matrix,
    t="product",
    objects: Optional[Sequence] = None,
    *,
    continuum: bool = False,
    probes: Sequence = (),
    name: str = "fuzzy",
) -> QCategory:
    """A fuzzy preorder ``[x <= y]`` with values in ``[0, 1]`` under a t-norm."""
    q = _tnorm_quantale(t)
    if continuum:
        return QCategory.from_rule(q, matrix, probes=probes, name=name)
    return QCategory.finite(q, _labels(len(matrix), objects), matrix, name=name)


def make_pm_space(
    points: Sequence,
    distances,
    t="minimum",
    *,
    cuts: Optional[Iterable[float]] = None,
    continuum: bool = False,
    name: str = "pm",
) -> QCategory:
    """A probabilistic metric space with ``d(x, y, -)`` a distance distribution.

    ``distances`` is a matrix of :class:`StepDistribution` (or their JSON
    form), or a pointwise rule ``d(x, y, t)``.  A pointwise rule is read off
    through ``cuts``, the candidate jump points, and must be left-continuous;
    otherwise :class:`LeftContinuityError` is raised naming the pair.
    """
    q = _delta_quantale(t)
    if continuum:
        return QCategory.from_rule(q, distances, probes=points, name=name)
    if callable(distances):
        if cuts is None:
            raise ValueError("a pointwise rule needs the candidate jump points")
        cuts = tuple(cuts)
        m = [[StepDistribution.from_function(lambda s, x=x, y=y: distances(x, y, s), cuts) for y in points] for x in points]
    else:
        m = [[v if isinstance(v, StepDistribution) else StepDistribution.from_json(v) for v in row] for row in distances]
    return QCategory.finite(q, points, m, name=name)


def embed_metric(c: QCategory, t="minimum") -> QCategory:
    """Send a distance ``d`` to the distribution ``step(d)`` (1 exactly beyond ``d``)."""
    q = _delta_quantale(t)
    name = f"{c.name}->delta"
    if c.is_finite:
        m = [[StepDistribution.step(v) for v in row] for row in c.matrix]
        return QCategory.finite(q, c.objects, m, name=name)
    return QCategory.from_rule(
        q, lambda x, y: StepDistribution.step(c.hom(x, y)), probes=c.probes, search_hint=c.search_hint, name=name
    )


def transitive_closure(q: Quantale, matrix: Sequence[Sequence]) -> list:
    """Smallest Q-category hom above ``matrix``: raise the diagonal to the unit
    and close under ``m[i][k] >= m[i][j] * m[j][k]`` until nothing changes."""
    n = len(matrix)
    m = [list(row) for row in matrix]
    for i in range(n):
        m[i][i] = q.join([m[i][i], q.unit])
    changed = True
    while changed:
        changed = False
        for i, j, k in product(range(n), repeat=3):
            v = q.tensor(m[i][j], m[j][k])
            if not q.leq(v, m[i][k]):
                m[i][k] = q.join([m[i][k], v])
                changed = True
    return m


# ---------------------------------------------------------------------------
# control functions


def _keep_inf(rule: Callable[[float], float]) -> Callable:
    def phi(t):
        t = LAWVERE.validate(t)
        return INF if t == INF else float(rule(t))

    return phi


def banach_control(k: float = 0.5) -> ControlFunction:
    """``phi(t) = k t`` on distances, ``0 <= k < 1``, with ``phi(inf) = inf``."""
    if not 0.0 <= k < 1.0:
        raise ValueError("Banach constant must lie in [0, 1)")
    return ControlFunction(LAWVERE, _keep_inf(lambda t: k * t), f"banach(k={k})", "bottom,unit", "analytic")


def boyd_wong_control(rule: Optional[Callable[[float], float]] = None, points: Optional[Sequence] = None, name: str = "") -> ControlFunction:
    """A distance control from a rule or from a table of ``(t, phi(t))`` points.

    A table is interpolated linearly from ``(0, 0)`` and continued past its
    last point with slope 1, which keeps ``phi(t) < t`` whenever the last
    point satisfies it.
    """
    if (rule is None) == (points is None):
        raise ValueError("give exactly one of rule or points")
    if points is not None:
        pts = sorted((float(a), float(b)) for a, b in points)
        if not pts or pts[0][0] <= 0.0:
            raise ValueError("table points need t > 0")
        xs = [0.0] + [a for a, _ in pts]
        ys = [0.0] + [b for _, b in pts]

        def table(t):
            if t >= xs[-1]:
                return ys[-1] + (t - xs[-1])
            i = max(j for j in range(len(xs)) if xs[j] <= t)
            w = (t - xs[i]) / (xs[i + 1] - xs[i])
            return ys[i] + w * (ys[i + 1] - ys[i])

        return ControlFunction(LAWVERE, _keep_inf(table), name or "boyd-wong(table)", "bottom,unit", "sampled")
    return ControlFunction(LAWVERE, _keep_inf(rule), name or "boyd-wong", "bottom,unit", "none")


def power_control(q: TNormQuantale, p: float = 0.5) -> ControlFunction:
    """``phi(t) = t ** p`` on ``[0, 1]``, ``0 < p < 1``; fixpoints 0 and 1 only."""
    if not 0.0 < p < 1.0:
        raise ValueError("exponent must lie in (0, 1)")
    return ControlFunction(q, lambda t: q.validate(t) ** p, f"power(p={p})", "bottom,unit", "analytic")


def identity_control(q: Quantale) -> ControlFunction:
    return ControlFunction(q, lambda t: t, "identity", "all", "analytic")


def delta_affine_control(q: Optional[DeltaQuantale] = None) -> ControlFunction:
    """``phi(u)(t) = (u(t) + 1) / 2`` for ``t > 0`` and ``phi(u)(0) = 0``.

    As written this sends the zero distribution to the constant 1/2, so 0 is
    not a fixpoint; the only fixpoint is the unit.
    """
    q = q or DeltaQuantale()
    return ControlFunction(
        q, lambda u: q.validate(u).map_levels(lambda v: 0.5 * (v + 1.0)), "delta-affine", "unit", "analytic"
    )


def delta_banach_control(K: float = 2.0, q: Optional[DeltaQuantale] = None) -> ControlFunction:
    """``phi(u)(t) = u(K t)`` with ``K > 1``: breakpoints shrink by ``K``."""
    if not K > 1.0:
        raise ValueError("K must exceed 1")
    q = q or DeltaQuantale()
    return ControlFunction(q, lambda u: q.validate(u).rescale(K), f"delta-banach(K={K})", "bottom,unit on delta+", "analytic")


def boolean_control_functions() -> list:
    """All maps ``{0,1} -> {0,1}`` passing :func:`check_control` on the full carrier."""
    found = []
    for img0, img1 in product((0, 1), repeat=2):
        table = {0: img0, 1: img1}
        phi = ControlFunction(BOOLEAN, table.__getitem__, f"bool[{img0}{img1}]")
        if check_control(phi, (0, 1)).passed:
            found.append(table)
    return found


def random_delta_plus(rng: random.Random, max_cuts: int = 4, grid: float = 1 / 64, span: float = 8.0) -> StepDistribution:
    """A random finite step function with ``u(inf) = 1``."""
    k = rng.randint(1, max_cuts)
    slots = rng.sample(range(1, int(span / grid) + 1), k)
    cuts = sorted(s * grid for s in slots)
    levels = sorted(rng.random() for _ in range(k)) + [1.0]
    return StepDistribution(tuple(cuts), tuple(levels))


def delta_plus_fixpoint_scan(
    K: float = 2.0,
    candidates: Optional[Iterable[StepDistribution]] = None,
    n: int = 1000,
    seed: int = DELTA_PLUS_SEED,
) -> Report:
    """Search the restricted carrier for fixpoints of ``u -> u(K -)``.

    Without candidates, scans 0, the unit and ``n`` random step functions
    with ``u(inf) = 1`` drawn with ``seed``.  Any fixpoint other than 0 or
    the unit fails the report: it would contradict the dichotomy on that
    sub-carrier.
    """
    q = DeltaQuantale()
    phi = delta_banach_control(K, q)
    if candidates is None:
        rng = random.Random(seed)
        candidates = [StepDistribution.zero(), StepDistribution.unit()] + [random_delta_plus(rng) for _ in range(n)]
    rep = Report(f"delta+ fixpoint scan (K={K})")
    rep.note(f"randomized scan, seed {seed}; evidence for the dichotomy only")
    fixed, scanned = [], 0
    for u in candidates:
        if not q.in_delta_plus(u):
            raise ValueError(f"{u!r} is not in delta+")
        scanned += 1
        if q.eq(phi(u), u):
            fixed.append(u)
            if not (q.is_bottom(u) or q.eq(u, q.unit)):
                rep.fail("forbidden-fixpoint", u)
    rep.data.update(scanned=scanned, fixpoints=fixed)
    return rep


# ---------------------------------------------------------------------------
# fixtures


@dataclass
class NamedFixture:
    name: str
    description: str
    category: Optional[QCategory] = None
    endomap: Any = None
    control: Optional[ControlFunction] = None
    start: Any = None
    horizon: int = 256
    expected: dict = field(default_factory=dict)
    kind: str = "solve"  # solve | sweep | counterexample | degenerate


def _line(x, y):
    return abs(x - y)


def _real_line(name="R", search_hint=None) -> QCategory:
    probes = [i / 2 for i in range(-8, 9)]
    return make_metric_space(probes, _line, continuum=True, search_hint=search_hint, name=name)


def _banach() -> NamedFixture:
    return NamedFixture(
        "banach",
        "f(x) = x/2 + 1 on the real line, k = 1/2",
        _real_line(),
        lambda x: x / 2 + 1,
        banach_control(0.5),
        start=0.0,
        horizon=64,
        expected={"limit": 2.0, "tolerance": 1e-6},
    )


def _boyd_wong() -> NamedFixture:
    # |f x - f y| = |x + y| |x - y| / 4 <= t / (1 + t) for t = |x - y| <= 1
    probes = [i / 20 for i in range(21)]
    c = make_metric_space(probes, _line, continuum=True, name="[0,1]")
    return NamedFixture(
        "boyd-wong",
        "f(x) = x^2/4 + 1/4 on [0, 1] with control t/(1+t)",
        c,
        lambda x: x * x / 4 + 0.25,
        boyd_wong_control(lambda t: t / (1.0 + t), name="t/(1+t)"),
        start=1.0,
        horizon=128,
        expected={"limit": 2.0 - math.sqrt(3.0), "tolerance": 1e-6},
    )


def _fuzzy_leq(x, y):
    return 1.0 if x <= y else math.exp(-(x - y))


def _fuzzy() -> NamedFixture:
    q = TNormQuantale(tnorm_by_name("product"))
    probes = [i / 2 for i in range(-8, 9)]
    c = QCategory.from_rule(q, _fuzzy_leq, probes=probes, name="fuzzy R")
    return NamedFixture(
        "fuzzy",
        "fuzzy order [x <= y] = exp(-max(x - y, 0)) under product, f(x) = x/2 + 1, control sqrt",
        c,
        lambda x: x / 2 + 1,
        power_control(q, 0.5),
        start=0.0,
        horizon=64,
        expected={"limit": 2.0, "tolerance": 1e-6},
    )


def _pm_embed() -> NamedFixture:
    c = embed_metric(_real_line())
    return NamedFixture(
        "pm-embed",
        "the Banach example embedded into distance distributions, control u(2t)",
        c,
        lambda x: x / 2 + 1,
        delta_banach_control(2.0, c.quantale),
        start=0.0,
        horizon=64,
        expected={"limit": 2.0, "tolerance": 1e-6},
    )


def _two_component() -> NamedFixture:
    def d(p, r):
        return abs(p[0] - r[0]) if p[1] == r[1] else INF

    def f(p):
        x, tag = p
        return (x / 2 + 1, "A") if tag == "A" else (x / 3 - 1, "B")

    probes = [(i / 2, tag) for tag in "AB" for i in range(-4, 7)]
    c = QCategory.from_rule(LAWVERE, d, probes=probes, name="R+R")
    return NamedFixture(
        "two-component",
        "two copies of the line at distance inf; x/2 + 1 on A, x/3 - 1 on B",
        c,
        f,
        banach_control(0.5),
        start=(0.0, "A"),
        horizon=64,
        expected={"limits": [(2.0, "A"), (-1.5, "B")], "case": "disconnected"},
        kind="sweep",
    )


def _boolean_degenerate() -> NamedFixture:
    c = make_ordered_set([[1, 1, 1], [0, 1, 1], [0, 0, 1]], "abc", name="3-chain")
    return NamedFixture(
        "boolean-degenerate",
        "monotone map on the chain a <= b <= c; a start with x = fx is already a fixpoint",
        c,
        {"a": "b", "b": "b", "c": "c"},
        identity_control(BOOLEAN),
        start="b",
        horizon=16,
        expected={"limit": "b"},
        kind="degenerate",
    )


def _precondition_fail() -> NamedFixture:
    c = make_metric_space("pq", [[0.0, INF], [INF, 0.0]], name="2 points at inf")
    return NamedFixture(
        "precondition-fail",
        "swap of two points at distance inf",
        c,
        {"p": "q", "q": "p"},
        banach_control(0.5),
        start="p",
        horizon=16,
        expected={"status": "precondition-failed"},
        kind="sweep",
    )


def _delta_counterexample() -> NamedFixture:
    q = DeltaQuantale()
    return NamedFixture(
        "delta-counterexample",
        "u -> u(2t) fixes the almost-constant 1/2 on all distributions but nothing besides 0, e on delta+",
        control=delta_banach_control(2.0, q),
        expected={"fixpoint": StepDistribution.constant(0.5)},
        kind="counterexample",
    )


_BUILDERS = {
    "banach": _banach,
    "boyd-wong": _boyd_wong,
    "fuzzy": _fuzzy,
    "pm-embed": _pm_embed,
    "delta-counterexample": _delta_counterexample,
    "boolean-degenerate": _boolean_degenerate,
    "two-component": _two_component,
    "precondition-fail": _precondition_fail,
}

FIXTURES = tuple(_BUILDERS)


def get_fixture(name: str) -> NamedFixture:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None


def finite_fixtures() -> list:
    """Finite categories with an endomap and control, for uniqueness checks."""
    pts = (0, 2, 3)
    step_map = {0: 2, 2: 3, 3: 3}
    line = make_metric_space(pts, _line, name="{0,2,3}")
    out = [
        NamedFixture("line-023", "finite line, f = 0->2->3", line, step_map, banach_control(0.5)),
    ]
    prod = TNormQuantale(tnorm_by_name("product"))
    fz = make_fuzzy_order([[2.0 ** -abs(x - y) for y in pts] for x in pts], prod, pts, name="fuzzy {0,2,3}")
    out.append(NamedFixture("fuzzy-023", "2^-|x-y| under product", fz, step_map, power_control(fz.quantale, 0.5)))
    pm = embed_metric(line)
    out.append(NamedFixture("pm-023", "finite line embedded in delta", pm, step_map, delta_banach_control(2.0, pm.quantale)))
    luk = TNormQuantale(tnorm_by_name("lukasiewicz"))
    lk = make_fuzzy_order([[max(0.0, 1.0 - abs(x - y) / 4) for y in pts] for x in pts], luk, pts, name="luk {0,2,3}")
    out.append(
        NamedFixture(
            "luk-023",
            "1 - |x-y|/4 under Lukasiewicz",
            lk,
            step_map,
            ControlFunction(luk, lambda t: (1.0 + t) / 2, "(1+t)/2", "unit", "analytic"),
        )
    )
    indiscrete = make_ordered_set([[1] * 3 for _ in range(3)], "xyz", name="indiscrete 3")
    out.append(
        NamedFixture("indiscrete", "all homs 1", indiscrete, {"x": "y", "y": "z", "z": "x"}, identity_control(BOOLEAN))
    )

    def d2(p, r):
        return abs(p[0] - r[0]) if p[1] == r[1] else INF

    objs = [(x, t) for t in "AB" for x in pts]
    two = make_metric_space(objs, d2, name="{0,2,3}+{0,2,3}")
    out.append(
        NamedFixture(
            "two-component-finite",
            "two copies of the finite line at distance inf",
            two,
            {(x, t): (step_map[x], t) for x, t in objs},
            banach_control(0.5),
            expected={"case": "disconnected"},
            kind="sweep",
        )
    )
    return out


def finite_lattices() -> list:
    """Chains of 1..6 elements and the small non-chain lattices up to 6 elements."""
    out = [FiniteQuantale.chain([i / max(n - 1, 1) for i in range(n)], name=f"chain{n}") for n in range(1, 7)]

    def square(a, b):  # 2 x 2
        return a[0] <= b[0] and a[1] <= b[1]

    out.append(FiniteQuantale([(i, j) for i in range(2) for j in range(2)], square, name="2x2"))
    out.append(FiniteQuantale([(i, j) for i in range(2) for j in range(3)], square, name="2x3"))
    m3 = {("0", x) for x in "0abc1"} | {(x, "1") for x in "0abc1"} | {(x, x) for x in "0abc1"}
    out.append(FiniteQuantale(list("0abc1"), lambda x, y: (x, y) in m3, name="M3"))
    # N5: 0 < a < b < 1, 0 < c < 1
    n5 = {("0", x) for x in "0abc1"} | {(x, "1") for x in "0abc1"} | {(x, x) for x in "0abc1"} | {("a", "b")}
    out.append(FiniteQuantale(list("0abc1"), lambda x, y: (x, y) in n5, name="N5"))
    # M3 with an extra top: 0 < a, b, c < m < 1
    m3t = {(x, y) for x in "0abcm1" for y in "0abcm1" if x == y or x == "0" or y == "1" or (y == "m" and x in "abc")}
    out.append(FiniteQuantale(list("0abcm1"), lambda x, y: (x, y) in m3t, name="M3+top"))
    return out
