"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line with the numbers
behind the verdict, then asserts it.  Run with ``pytest -s`` (or look at the
``-v`` output, which shows the lines too).
"""

from __future__ import annotations

import math
import random
import time

import numpy as np
import pytest

from oracles import PITCH, all_maps, all_preorders, evaluate, grid_convolution, grid_pointwise, random_grid_distribution
from qfix.cauchy import ObjectSequence, check_cauchy_adjoint_equivalence
from qfix.contraction import check_contraction, check_control, picard_solve, sweep_solve, verify_fixpoint
from qfix.instances import (
    BOOLEAN,
    boolean_control_functions,
    delta_banach_control,
    delta_plus_fixpoint_scan,
    finite_fixtures,
    finite_lattices,
    get_fixture,
    make_ordered_set,
    transitive_closure,
)
from qfix.qcat import QCategory, check_category, check_functor, QFunctor, homs_nonbottom, object_iso
from qfix.quantale import (
    LUKASIEWICZ,
    MINIMUM,
    PRODUCT,
    BooleanQuantale,
    DeltaQuantale,
    LawvereQuantale,
    TNormQuantale,
    _way_below_linear,
    check_quantale_axioms,
    check_quantale_laws_random,
    way_below_bruteforce,
)
from qfix.contraction import ControlFunction
from qfix.stepdist import StepDistribution

TOL = 1e-9


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, text: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        assert ok, text

    return emit


def test_criterion_1_quantale_law_suite(verdict):
    start = time.perf_counter()
    lines, ok = [], True
    rep = check_quantale_axioms(BooleanQuantale())
    ok &= rep.passed
    lines.append(f"boolean exhaustive {'ok' if rep.passed else 'FAILED'}")
    for q in (LawvereQuantale(), TNormQuantale(PRODUCT), TNormQuantale(MINIMUM), TNormQuantale(LUKASIEWICZ)):
        rep = check_quantale_laws_random(q, trials=10_000, seed=1)
        ok &= rep.passed
        lines.append(f"{q.name} {'ok' if rep.passed else 'FAILED'}")
    # distance distributions: 10^4 trials split over the three t-norms
    split = (3334, 3333, 3333)
    for t, n in zip((MINIMUM, PRODUCT, LUKASIEWICZ), split):
        rep = check_quantale_laws_random(DeltaQuantale(t), trials=n, seed=2)
        ok &= rep.passed
        lines.append(f"delta:{t.name} x{n} {'ok' if rep.passed else 'FAILED'}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10.0
    verdict(1, ok, f"{'; '.join(lines)}; {elapsed:.2f}s (< 10s)")


@pytest.mark.parametrize("tname", ["product", "minimum", "lukasiewicz"])
def test_criterion_2_delta_kernel_exactness(verdict, tname):
    t = {"product": PRODUCT, "minimum": MINIMUM, "lukasiewicz": LUKASIEWICZ}[tname]
    rng = random.Random({"product": 11, "minimum": 12, "lukasiewicz": 13}[tname])
    n = int(round(2.25 / PITCH))  # inputs have cuts in (0, 1], sums in (0, 2]
    worst = 0.0
    for _ in range(1000):
        f, g = random_grid_distribution(rng), random_grid_distribution(rng)
        worst = max(
            worst,
            float(np.max(np.abs(evaluate(f.convolve(g, t.op), n) - grid_convolution(f, g, tname, n)))),
            float(np.max(np.abs(evaluate(f.join(g), n) - grid_pointwise([f, g], np.max, n)))),
            float(np.max(np.abs(evaluate(f.meet(g), n) - grid_pointwise([f, g], np.min, n)))),
        )
    verdict(2, worst <= TOL, f"{tname}: 1000 pairs, {n + 1} grid points at pitch {PITCH:.3g}, max error {worst:.2e}")


def _random_category(kind: str, rng: random.Random) -> QCategory:
    n = rng.randint(1, 6)
    if kind == "boolean":
        q = BooleanQuantale()
        vals = [0, 0, 1]
    elif kind == "lukasiewicz":
        q = TNormQuantale(LUKASIEWICZ)
        vals = [0.0, 0.25, 0.5, 0.75, 1.0, 1.0]
    else:
        q = LawvereQuantale()
        vals = [0.0, 0.0, 1.0, 2.0, 3.0, math.inf]
    raw = [[rng.choice(vals) for _ in range(n)] for _ in range(n)]
    return QCategory.finite(q, range(n), transitive_closure(q, raw), name=f"{kind}-{n}")


def test_criterion_3_cauchy_iff_adjunction(verdict):
    rng = random.Random(3)
    agree = cauchy = unstable = 0
    bad = []
    for i in range(200):
        c = _random_category(("boolean", "lukasiewicz", "lawvere")[i % 3], rng)
        objs = c.objects
        prefix = [rng.choice(objs) for _ in range(rng.randint(0, 3))]
        if rng.random() < 0.4:
            cycle = [rng.choice(objs)] * rng.randint(1, 3)
        else:
            cycle = [rng.choice(objs) for _ in range(rng.randint(1, 3))]
        seq = ObjectSequence.eventually_periodic(c, prefix, cycle)
        rep = check_cauchy_adjoint_equivalence(seq, 64)
        unstable += not rep.data["stabilized"]
        cauchy += rep.data["cauchy"]
        if rep.data["cauchy"] == rep.data["adjoint"] and rep.data["stabilized"]:
            agree += 1
        else:
            bad.append((c.name, prefix, cycle))
    ok = agree == 200
    verdict(3, ok, f"{agree}/200 agree ({cauchy} Cauchy, {200 - cauchy} not), {unstable} unstabilized, first mismatch {bad[:1]}")


def test_criterion_4_banach(verdict):
    fx = get_fixture("banach")
    start = time.perf_counter()
    r = picard_solve(fx.category, fx.endomap, fx.control, 0.0, horizon=64)
    elapsed = time.perf_counter() - start
    ok_fix, homs = verify_fixpoint(fx.category, fx.endomap, r.limit) if r.found else (False, None)
    err = abs(r.limit - 2.0) if r.found else math.inf
    ok = r.found and err <= 1e-6 and ok_fix and elapsed < 1.0
    verdict(4, ok, f"status {r.status}, limit {r.limit!r}, error {err:.1e}, homs {homs}, {elapsed * 1000:.1f} ms")


def test_criterion_5_boyd_wong(verdict):
    fx = get_fixture("boyd-wong")
    sample = [10.0 ** (-6 + 12 * i / 999) for i in range(1000)]
    ctrl = check_control(fx.control, sample)
    contr = check_contraction(fx.category, fx.endomap, fx.control)
    axioms = check_category(fx.category)
    r = picard_solve(fx.category, fx.endomap, fx.control, fx.start, fx.horizon)
    want = 2.0 - math.sqrt(3.0)
    err = abs(r.limit - want) if r.found else math.inf
    ok = ctrl.passed and contr.passed and axioms.passed and r.found and err <= 1e-6
    verdict(
        5,
        ok,
        f"control on 1000 points of (0, inf): {ctrl.passed}; contraction: {contr.passed}; "
        f"limit {r.limit!r} vs 2 - sqrt(3), error {err:.1e}",
    )


def test_criterion_6_uniqueness(verdict):
    violations = []
    nonzero_checked = 0
    for fx in finite_fixtures():
        c = fx.category
        sw = sweep_solve(c, fx.endomap, fx.control)
        found = [r.limit for r in sw.results if r.found]
        if homs_nonbottom(c):
            nonzero_checked += 1
            for u in found:
                for v in found:
                    if not object_iso(c, u, v):
                        violations.append((fx.name, u, v))
        for k in sw.classes.values():
            if not k.consistent or k.case == "theory-violation":
                violations.append((fx.name, k.case))
    cases = []
    for name in ("two-component",):
        fx = get_fixture(name)
        sw = sweep_solve(fx.category, fx.endomap, fx.control, horizon=fx.horizon)
        cases += [k.case for k in sw.classes.values()]
    fin = [fx for fx in finite_fixtures() if fx.name == "two-component-finite"][0]
    sw = sweep_solve(fin.category, fin.endomap, fin.control)
    cases += [k.case for k in sw.classes.values()]
    ok = not violations and cases == ["disconnected", "disconnected"]
    verdict(6, ok, f"{nonzero_checked} non-zero-hom fixtures, violations {violations}; two-component cases {cases}")


def test_criterion_7_boolean_degeneracy(verdict):
    controls = boolean_control_functions()
    tables = sorted((t[0], t[1]) for t in controls)
    phis = [ControlFunction(BOOLEAN, t.__getitem__, f"bool{t[0]}{t[1]}") for t in controls]
    runs = mismatches = 0
    for n in (2, 3):
        for rel in all_preorders(n):
            c = make_ordered_set(rel)
            for f in all_maps(c.objects):
                if not check_functor(QFunctor(c, c, f)).passed:
                    continue
                for phi in phis:
                    if not check_contraction(c, f, phi).passed:
                        continue
                    for x0 in c.objects:
                        runs += 1
                        r = picard_solve(c, f, phi, x0, horizon=16, check=False)
                        hypothesis = object_iso(c, x0, f[x0])
                        if hypothesis:
                            if not (r.found and object_iso(c, r.limit, x0)):
                                mismatches += 1
                        elif r.status != "precondition-failed":
                            mismatches += 1
    ok = tables == [(0, 1), (1, 1)] and mismatches == 0 and runs > 0
    verdict(7, ok, f"controls {tables}; {runs} solver runs on 2- and 3-element ordered sets, {mismatches} mismatches")


def test_criterion_8_delta_plus(verdict):
    q = DeltaQuantale()
    phi = delta_banach_control(2.0, q)
    u = StepDistribution.constant(0.5)
    rep = check_control(phi, [StepDistribution.zero(), StepDistribution.unit(), StepDistribution.step(1.0), u])
    detected = any(v.law == "fixpoint-dichotomy" and q.eq(v.witness[0], u) for v in rep.violations)
    scan = delta_plus_fixpoint_scan(2.0, n=1000)
    fixed = scan.data["fixpoints"]
    only_trivial = all(q.is_bottom(v) or q.eq(v, q.unit) for v in fixed)
    ok = detected and scan.passed and only_trivial and scan.data["scanned"] >= 1000
    verdict(
        8,
        ok,
        f"almost-constant 1/2 flagged: {detected}; scanned {scan.data['scanned']} delta+ functions, "
        f"fixpoints {[f.levels for f in fixed]}",
    )


def test_criterion_9_way_below(verdict):
    pairs = disagreements = 0
    for lat in finite_lattices():
        for a in lat.elements():
            for b in lat.elements():
                pairs += 1
                brute = way_below_bruteforce(lat, a, b)
                if lat.is_linear:
                    lin = _way_below_linear(lat, a, b)
                    same = lin.holds == brute.holds
                else:
                    # every element of a finite lattice is compact
                    same = brute.holds == lat.leq(a, b)
                disagreements += not same
    verdict(9, disagreements == 0, f"{len(finite_lattices())} lattices, {pairs} pairs, {disagreements} disagreements")
