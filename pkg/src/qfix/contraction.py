"""Control functions, contractions and the Picard fixpoint solver.

A control function ``phi: Q -> Q`` satisfies ``t <= phi(t)`` and has no
fixpoints besides the bottom and elements above the unit.  An endomap ``f``
is a ``phi``-contraction when ``C(fx, fy) >= phi(C(x, y))``.  Starting from
``x0`` with ``C(x0, f x0)`` and ``C(f x0, x0)`` both non-bottom, the orbit is
Cauchy and the object representing its presheaves is a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

from .cauchy import CauchyEstimate, ObjectSequence, cauchy_degree, phi_of, psi_of
from .qcat import QCategory, as_map, homs_nonbottom, is_symmetric, object_iso, representing_object
from .quantale import Quantale
from .report import Report

__all__ = [
    "ControlFunction",
    "IterationDiagnostics",
    "FixpointResult",
    "PairClassification",
    "SweepResult",
    "check_control",
    "check_contraction",
    "picard_solve",
    "verify_fixpoint",
    "classify_fixpoint_pair",
    "sweep_solve",
]

FIXPOINT_FOUND = "fixpoint-found"
NOT_CAUCHY = "not-cauchy"
NOT_REPRESENTABLE = "not-representable"
PRECONDITION_FAILED = "precondition-failed"

DEFAULT_SOLVER_HORIZON = 256


@dataclass(frozen=True)
class ControlFunction:
    """``rule`` plus metadata; calling the object applies the rule.

    ``fixpoints`` documents which fixpoints are expected (for instance
    ``"bottom,unit"``); ``certificate`` says how semicontinuity is known:
    ``analytic``, ``sampled`` or ``none``.
    """

    quantale: Quantale
    rule: Callable[[Any], Any]
    name: str = "phi"
    fixpoints: str = "bottom,above-unit"
    certificate: str = "none"

    def __call__(self, t):
        return self.rule(t)


def check_control(phi: ControlFunction, sample: Iterable) -> Report:
    """Check ``t <= phi(t)`` and the fixpoint dichotomy on every sampled ``t``.

    Only exact fixpoints ``phi(t) == t`` can violate the dichotomy.  A control
    that touches the identity near the unit (``t/(1+t)`` at 0, say) comes
    within tolerance of ``t`` on a whole interval; such near-fixpoints are
    counted in a note instead.
    """
    q = phi.quantale
    rep = Report(f"control function {phi.name}")
    rep.note("checked on a finite sample of Q only")
    fixed, near = [], 0
    for t in sample:
        t = q.validate(t)
        v = q.validate(phi(t))
        if not q.leq(t, v):
            rep.fail("inflationary", t, detail=f"phi(t) = {v!r} is not above t")
        if v == t:
            fixed.append(t)
            if not (q.is_bottom(t) or q.above_unit(t)):
                rep.fail("fixpoint-dichotomy", t, detail="fixpoint strictly between bottom and unit")
        elif q.eq(v, t) and not (q.is_bottom(t) or q.above_unit(t)):
            near += 1
    if near:
        rep.note(f"{near} sampled point(s) with phi(t) within tolerance of t but not equal")
    rep.data["fixpoints"] = fixed
    rep.data["near_fixpoints"] = near
    return rep


def check_contraction(c: QCategory, f, phi: ControlFunction, sample: Optional[Sequence] = None) -> Report:
    """``phi(C(x, y)) <= C(fx, fy)`` on all pairs of the sample.

    ``data["worst_defect"]`` is the meet of ``phi(C(x,y)) -> C(fx,fy)``,
    above the unit exactly when the inequality holds everywhere.
    """
    q = c.quantale
    fm = as_map(f)
    objs = tuple(sample) if sample is not None else c.sample()
    rep = Report(f"{phi.name}-contraction")
    if not c.is_finite or sample is not None:
        rep.note(f"checked on {len(objs)} sampled objects only")
    images = [fm(x) for x in objs]
    worst = q.top
    for i, x in enumerate(objs):
        for j, y in enumerate(objs):
            lhs = phi(c.hom(x, y))
            rhs = c.hom(images[i], images[j])
            worst = q.meet([worst, q.residuate(lhs, rhs)])
            if not q.leq(lhs, rhs):
                rep.fail("contraction", x, y, detail=f"phi(C(x,y)) = {lhs!r} not below C(fx,fy) = {rhs!r}")
    rep.data["worst_defect"] = worst
    return rep


@dataclass
class IterationDiagnostics:
    horizon: int
    forward: list  # c_n = C(f^n x, f^{n+1} x)
    backward: list  # a_n = C(f^{n+1} x, f^n x)
    forward_monotone: bool
    backward_monotone: bool
    estimate: Optional[CauchyEstimate] = None
    orbit_stable: bool = False

    @property
    def window(self) -> list:
        return self.estimate.window if self.estimate else []


@dataclass
class FixpointResult:
    status: str
    limit: Any = None
    diagnostics: Optional[IterationDiagnostics] = None
    fixpoint_homs: Optional[tuple] = None  # (C(fu, u), C(u, fu))
    method: str = ""
    start: Any = None
    notes: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == FIXPOINT_FOUND


def verify_fixpoint(c: QCategory, f, u):
    """``(1 <= C(fu, u) and 1 <= C(u, fu), (C(fu, u), C(u, fu)))``."""
    q = c.quantale
    fu = as_map(f)(u)
    homs = (c.hom(fu, u), c.hom(u, fu))
    return q.above_unit(homs[0]) and q.above_unit(homs[1]), homs


def _monotone(q, seq) -> bool:
    return all(q.leq(a, b) for a, b in zip(seq, seq[1:]))


def picard_solve(
    c: QCategory,
    f,
    phi: ControlFunction,
    x0,
    horizon: int = DEFAULT_SOLVER_HORIZON,
    check: bool = True,
) -> FixpointResult:
    """Iterate ``f`` from ``x0`` and extract the limit of the orbit.

    Finite carriers go through the representing object of ``phi_x, psi_x``.
    Rule-based carriers use the last iterate once consecutive homs sit at the
    unit within tolerance ("numerical limit").  Every result carries the
    orbit diagnostics, and ``fixpoint-found`` is only returned after the
    fixpoint inequalities were verified.
    """
    q = c.quantale
    fm = as_map(f)
    notes = [f"horizon {horizon}"]
    if check:
        rep = check_contraction(c, fm, phi)
        if not rep.passed:
            v = rep.violations[0]
            notes.append(f"contraction check failed at {v.witness!r}")
            return FixpointResult(PRECONDITION_FAILED, start=x0, notes=notes)
    fx0 = fm(x0)
    if q.is_bottom(c.hom(x0, fx0)) or q.is_bottom(c.hom(fx0, x0)):
        notes.append("C(x0, f x0) or C(f x0, x0) is bottom")
        return FixpointResult(PRECONDITION_FAILED, start=x0, notes=notes)

    orbit = ObjectSequence.orbit(c, fm, x0)
    terms = orbit.terms(horizon)
    fwd = [c.hom(terms[n], terms[n + 1]) for n in range(horizon)]
    bwd = [c.hom(terms[n + 1], terms[n]) for n in range(horizon)]
    est = cauchy_degree(orbit, horizon)
    stable = q.eq(fwd[-1], q.unit) and q.eq(bwd[-1], q.unit)
    diag = IterationDiagnostics(horizon, fwd, bwd, _monotone(q, fwd), _monotone(q, bwd), est, stable)

    if not q.above_unit(est.value):
        if not est.stabilized:
            notes.append("Cauchy estimate not stabilized; verdict provisional")
        return FixpointResult(NOT_CAUCHY, diagnostics=diag, start=x0, notes=notes)
    if not est.stabilized:
        if not c.is_finite and stable:
            notes.append("Cauchy estimate not stabilized; accepted on orbit stabilization")
        else:
            notes.append("Cauchy estimate not stabilized between horizon/2 and horizon")

    if not c.is_finite and stable:
        candidate, method = terms[-1], "numerical-limit"
    elif c.is_finite or c.search_hint is not None:
        candidate = representing_object(c, phi_of(orbit, horizon), psi_of(orbit, horizon))
        method = "representing-object"
        if candidate is None:
            return FixpointResult(NOT_REPRESENTABLE, diagnostics=diag, method=method, start=x0, notes=notes)
    else:
        notes.append("orbit did not stabilize and there is no search hint")
        return FixpointResult(NOT_CAUCHY, diagnostics=diag, start=x0, notes=notes)

    ok, homs = verify_fixpoint(c, fm, candidate)
    if not ok:
        notes.append("candidate failed the fixpoint inequalities")
        return FixpointResult(PRECONDITION_FAILED, candidate, diag, homs, method, x0, notes)
    return FixpointResult(FIXPOINT_FOUND, candidate, diag, homs, method, x0, notes)


# ---------------------------------------------------------------------------
# uniqueness


@dataclass(frozen=True)
class PairClassification:
    case: str  # isomorphic | forward-only | backward-only | disconnected | theory-violation
    hom_uv: Any
    hom_vu: Any
    propositions: tuple = ()
    consistent: bool = True

    def __str__(self):
        return self.case


def _bucket(q, v) -> str:
    if q.is_bottom(v):
        return "bottom"
    if q.above_unit(v):
        return "unit"
    return "between"


_CASES = {
    ("unit", "unit"): "isomorphic",
    ("unit", "bottom"): "forward-only",
    ("bottom", "unit"): "backward-only",
    ("bottom", "bottom"): "disconnected",
}


def classify_fixpoint_pair(c: QCategory, f, phi: ControlFunction, u, v) -> PairClassification:
    """Place two fixpoints in the four-case analysis of ``(C(u,v), C(v,u))``.

    ``propositions`` lists the uniqueness results whose hypothesis holds on
    the category's tested scope; ``consistent`` is false if the case found
    contradicts one of them.
    """
    q = c.quantale
    huv, hvu = c.hom(u, v), c.hom(v, u)
    case = _CASES.get((_bucket(q, huv), _bucket(q, hvu)), "theory-violation")
    props = []
    consistent = True
    scope = c.sample() if not c.is_finite else None
    if homs_nonbottom(c, scope):
        props.append("nonzero-homs: isomorphic")
        consistent &= case == "isomorphic"
    if is_symmetric(c, scope):
        props.append("symmetric: isomorphic or disconnected")
        consistent &= case in ("isomorphic", "disconnected")
    return PairClassification(case, huv, hvu, tuple(props), consistent)


@dataclass
class SweepResult:
    results: list  # FixpointResult per start, in start order
    fixpoints: list  # distinct fixpoints up to isomorphism
    classes: dict  # (i, j) -> PairClassification over distinct fixpoints
    notes: list = field(default_factory=list)

    @property
    def failed_starts(self) -> list:
        return [r.start for r in self.results if r.status == PRECONDITION_FAILED]


def sweep_solve(
    c: QCategory,
    f,
    phi: ControlFunction,
    starts: Optional[Sequence] = None,
    horizon: int = DEFAULT_SOLVER_HORIZON,
) -> SweepResult:
    """Run the solver from every start (default: the carrier) and classify the fixpoints."""
    if starts is None:
        starts = c.carrier() if (c.is_finite or c.search_hint is not None) else c.sample()
    check = check_contraction(c, f, phi)
    results = []
    for x0 in starts:
        if not check.passed:
            results.append(FixpointResult(PRECONDITION_FAILED, start=x0, notes=["contraction check failed"]))
        else:
            results.append(picard_solve(c, f, phi, x0, horizon, check=False))
    distinct = []
    for r in results:
        if r.found and not any(object_iso(c, r.limit, u) for u in distinct):
            distinct.append(r.limit)
    classes = {}
    for i, u in enumerate(distinct):
        for j, v in enumerate(distinct):
            if i < j:
                classes[(i, j)] = classify_fixpoint_pair(c, f, phi, u, v)
    notes = []
    if results and all(r.status == PRECONDITION_FAILED for r in results):
        notes.append(f"precondition failed at every tested start: {[r.start for r in results]!r}")
    return SweepResult(results, distinct, classes, notes)
