import math

import pytest

from qfix.contraction import check_control, picard_solve
from qfix.instances import (
    FIXTURES,
    boyd_wong_control,
    delta_affine_control,
    delta_banach_control,
    delta_plus_fixpoint_scan,
    embed_metric,
    finite_fixtures,
    get_fixture,
    identity_control,
    make_fuzzy_order,
    make_metric_space,
    make_ordered_set,
    make_pm_space,
    transitive_closure,
)
from qfix.qcat import check_category, object_iso
from qfix.quantale import LUKASIEWICZ, DeltaQuantale, LawvereQuantale, TNormQuantale
from qfix.stepdist import LeftContinuityError, StepDistribution

D = DeltaQuantale()
E = StepDistribution.unit()


def test_ordered_sets():
    assert check_category(make_ordered_set([[1, 1], [0, 1]])).passed
    assert check_category(make_ordered_set([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).passed
    rep = check_category(make_ordered_set([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))
    assert not rep.passed and rep.violations[0].law == "composition"


def test_metric_spaces():
    line = make_metric_space([0.0, 1.0, 2.5], lambda x, y: abs(x - y), continuum=True)
    assert check_category(line).passed
    asym = make_metric_space("ab", [[0, 1], [3, 0]])
    assert check_category(asym).passed
    assert not check_category(make_metric_space("abc", [[0, 1, 3], [1, 0, 1], [3, 1, 0]])).passed


def test_fuzzy_orders():
    assert check_category(make_fuzzy_order([[1.0, 1.0], [0.0, 1.0]])).passed
    raw = [[0.3, 0.75, 0.0], [0.5, 1.0, 0.25], [0.0, 0.5, 0.6]]
    closed = transitive_closure(TNormQuantale(LUKASIEWICZ), raw)
    assert check_category(make_fuzzy_order(closed, "lukasiewicz")).passed
    assert not check_category(make_fuzzy_order([[0.9, 1.0], [1.0, 1.0]])).passed


def test_pm_spaces():
    indiscrete = make_pm_space("ab", [[E, E], [E, E]])
    assert check_category(indiscrete).passed
    metric = make_metric_space("abc", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert check_category(embed_metric(metric)).passed


def test_right_continuous_input_rejected():
    with pytest.raises(LeftContinuityError):
        make_pm_space("ab", lambda x, y, t: 1.0 if x == y or t >= 1 else 0.0, cuts=[1.0])
    ok = make_pm_space("ab", lambda x, y, t: 1.0 if t > (0 if x == y else 1) else 0.0, cuts=[1.0])
    assert check_category(ok).passed


def test_embedding_agrees_with_metric_solve():
    fin = {fx.name: fx for fx in finite_fixtures()}
    plain, embedded = fin["line-023"], fin["pm-023"]
    for x0 in plain.category.objects:
        a = picard_solve(plain.category, plain.endomap, plain.control, x0)
        b = picard_solve(embedded.category, embedded.endomap, embedded.control, x0)
        assert a.found and b.found and object_iso(plain.category, a.limit, b.limit)
    fx = get_fixture("pm-embed")
    r = picard_solve(fx.category, fx.endomap, fx.control, fx.start, fx.horizon)
    assert r.found and abs(r.limit - 2.0) <= 1e-6


def test_controls():
    sample = [10.0 ** (k / 4) for k in range(-24, 25)] + [0.0, math.inf]
    assert check_control(boyd_wong_control(lambda t: t / (1 + t)), sample).passed
    assert not check_control(identity_control(LawvereQuantale()), [0.5, 1.0]).passed
    table = boyd_wong_control(points=[(1.0, 0.5), (2.0, 1.2)])
    assert table(1.0) == 0.5 and table(3.0) == pytest.approx(2.2)


def test_delta_affine_control():
    phi = delta_affine_control(D)
    assert D.eq(phi(E), E)
    assert D.eq(phi(StepDistribution.constant(0.5)), StepDistribution.constant(0.75))
    # the displayed formula sends the zero distribution to the constant 1/2
    assert D.eq(phi(StepDistribution.zero()), StepDistribution.constant(0.5))


def test_delta_banach_control():
    phi = delta_banach_control(2.0, D)
    assert D.eq(phi(E), E)
    half = StepDistribution.constant(0.5)
    assert D.eq(phi(half), half)
    assert phi(StepDistribution.step(3.0)) == StepDistribution.step(1.5)
    assert not check_control(phi, [half]).passed


def test_delta_plus_scan_is_seeded():
    a = delta_plus_fixpoint_scan(2.0, n=50)
    b = delta_plus_fixpoint_scan(2.0, n=50)
    assert a.passed and a.data["scanned"] == 52
    assert a.data["fixpoints"] == b.data["fixpoints"]
    with pytest.raises(ValueError):
        delta_plus_fixpoint_scan(2.0, candidates=[StepDistribution.constant(0.5)])


def test_every_fixture_category_is_valid():
    for name in FIXTURES:
        fx = get_fixture(name)
        if fx.category is not None:
            assert check_category(fx.category).passed, name
    for fx in finite_fixtures():
        assert check_category(fx.category).passed, fx.name
