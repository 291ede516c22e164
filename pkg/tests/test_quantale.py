import math

import pytest
from hypothesis import given, settings, strategies as st

from qfix.quantale import (
    LUKASIEWICZ,
    PRODUCT,
    BooleanQuantale,
    DeltaQuantale,
    FiniteQuantale,
    LawvereQuantale,
    SequenceTrial,
    TNormQuantale,
    UnsupportedError,
    check_quantale_axioms,
    is_seq_lsc,
    way_below,
)
from qfix.stepdist import StepDistribution

L = LawvereQuantale()
B = BooleanQuantale()
I = TNormQuantale(PRODUCT)
LUK = TNormQuantale(LUKASIEWICZ)
D = DeltaQuantale()


def test_lawvere_order_is_reversed():
    assert L.leq(3.0, 2.0)
    assert not L.leq(2.0, 3.0)
    assert L.join([2.0, 5.0]) == 2.0
    assert L.meet([2.0, 5.0]) == 5.0
    assert L.tensor(2.0, 3.0) == 5.0
    assert L.unit == 0.0 and L.bottom == math.inf


def test_empty_families():
    assert L.join([]) == math.inf
    assert D.join([]) == StepDistribution.zero()
    assert D.meet([]) == D.top


def test_simple_values():
    assert B.leq(0, 1)
    assert B.meet([1, 1]) == 1
    assert B.unit == 1
    assert I.join([0.2, 0.7]) == 0.7
    assert LUK.tensor(0.7, 0.6) == pytest.approx(0.3)
    assert D.leq(StepDistribution.step(1.0), StepDistribution.step(1.0))
    assert D.unit == StepDistribution.unit()


def test_residuation():
    assert I.residuate(0.5, 0.3) == pytest.approx(0.6, abs=1e-9)
    assert B.residuate(1, 0) == 0
    for q, b in ((L, 2.5), (I, 0.4), (B, 0), (LUK, 0.3)):
        assert q.eq(q.residuate(q.unit, b), b)


def test_way_below_examples():
    assert way_below(I, 0.3, 0.5).holds
    assert not way_below(I, 0.5, 0.5).holds
    chain = FiniteQuantale.chain([0.0, 0.5, 1.0])
    w = way_below(chain, 0.5, 0.5)
    assert w.holds and w.rationale == "isolated-equal"
    with pytest.raises(UnsupportedError):
        way_below(D, D.unit, D.unit)


def test_axioms_pass():
    assert check_quantale_axioms(B).passed
    assert check_quantale_axioms(LUK, sample=[0.0, 0.25, 0.5, 0.75, 1.0]).passed


class _BrokenLawvere(LawvereQuantale):
    def _tensor(self, a, b):
        if {a, b} == {2.0, 3.0}:
            return 4.0
        return super()._tensor(a, b)


def test_broken_tensor_is_caught():
    rep = check_quantale_axioms(_BrokenLawvere(), sample=[0.0, 1.0, 2.0, 3.0, math.inf])
    assert not rep.passed
    assert {v.law for v in rep.violations} & {"associativity", "distributivity-left", "distributivity-right", "distributivity"}


reals = st.floats(min_value=0.0, max_value=1e6, allow_nan=False) | st.just(math.inf)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(reals, reals, reals)
def test_lawvere_residual_adjunction(a, b, c):
    # a * b <= c  iff  b <= a -> c
    assert L.leq(L.tensor(a, b), c) == L.leq(b, L.residuate(a, c))


@settings(max_examples=300)
@given(unit, unit, unit)
def test_tnorm_distributes_over_binary_join(a, b, c):
    for q in (I, LUK):
        assert q.eq(q.tensor(a, q.join([b, c])), q.join([q.tensor(a, b), q.tensor(a, c)]))


def test_lsc_examples():
    half = lambda t: t / 2
    trial = SequenceTrial(lambda n: 1 + 1 / (n + 1), limit=1.0)
    assert is_seq_lsc(L, half, [trial]).passed
    assert is_seq_lsc(I, lambda t: t * t, [[0.3] * 5]).passed


def test_lsc_falsified_by_jump():
    # in the reversed order t_n = 1 + 1/n climbs to 1 from below; a jump at 1
    # that drops the value makes phi(liminf) strictly above liminf phi
    def jump(t):
        return 0.0 if t <= 1.0 else 5.0

    rep = is_seq_lsc(L, jump, [SequenceTrial(lambda n: 1 + 1 / (n + 1), limit=1.0, name="1+1/n")])
    assert not rep.passed
    assert rep.violations[0].witness[0] == "1+1/n"
