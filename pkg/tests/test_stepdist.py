import math
import random

import numpy as np
import pytest

from oracles import sample, random_grid_distribution
from qfix.quantale import LUKASIEWICZ, MINIMUM, PRODUCT
from qfix.stepdist import LeftContinuityError, StepDistribution


def test_call_matches_definition():
    rng = random.Random(5)
    pts = np.array([0.0, 1e-12, 1 / 128, 0.25, 0.5, 0.999, 1.0, 1.5, 10.0, math.inf])
    for _ in range(200):
        f = random_grid_distribution(rng)
        assert [f(t) for t in pts] == list(sample(f, pts))


def test_value_at_cut_is_lower_plateau():
    f = StepDistribution.step(1.0)
    assert f(1.0) == 0.0
    assert f(1.0 + 1e-12) == 1.0
    assert f(0.0) == 0.0


def test_unit_and_zero():
    e = StepDistribution.unit()
    assert e(0.0) == 0.0 and e(1e-300) == 1.0 and e(math.inf) == 1.0
    assert StepDistribution.zero()(math.inf) == 0.0


def test_step_convolution_adds_breakpoints():
    for t in (MINIMUM, PRODUCT, LUKASIEWICZ):
        assert StepDistribution.step(1.0).convolve(StepDistribution.step(2.0), t.op) == StepDistribution.step(3.0)


def test_unit_is_neutral():
    rng = random.Random(8)
    e = StepDistribution.unit()
    for _ in range(50):
        f = random_grid_distribution(rng)
        assert f.convolve(e, MINIMUM.op).approx_eq(f, 1e-12)


def test_from_function_accepts_left_continuous():
    f = StepDistribution.from_function(lambda t: 0.0 if t <= 2 else 1.0, [2.0])
    assert f == StepDistribution.step(2.0)


def test_from_function_rejects_right_continuous():
    with pytest.raises(LeftContinuityError):
        StepDistribution.from_function(lambda t: 0.0 if t < 2 else 1.0, [2.0])


def test_from_function_rejects_decreasing():
    with pytest.raises(LeftContinuityError):
        StepDistribution.from_function(lambda t: 0.0 if t == 0 else (1.0 if t <= 1 else 0.5), [1.0])


def test_residual_is_largest_solution():
    rng = random.Random(9)
    for t in (MINIMUM, PRODUCT, LUKASIEWICZ):
        for _ in range(40):
            f, g = random_grid_distribution(rng), random_grid_distribution(rng)
            r = f.residual(g, t.residuum)
            assert f.convolve(r, t.op).leq(g, 1e-9)
            # nudging any plateau up breaks the inequality or is not a distribution
            for i, lvl in enumerate(r.levels):
                if lvl >= 1.0:
                    continue
                bumped = list(r.levels)
                bumped[i] = min(1.0, lvl + 1e-3)
                for j in range(i + 1, len(bumped)):
                    bumped[j] = max(bumped[j], bumped[i])
                try:
                    h = StepDistribution(r.cuts, tuple(bumped))
                except ValueError:
                    continue
                assert not f.convolve(h, t.op).leq(g, 1e-9)


def test_json_roundtrip():
    f = StepDistribution((0.5, 2.0), (0.1, 0.4, 1.0))
    assert StepDistribution.from_json(f.to_json()) == f


def test_rescale_shrinks_breakpoints():
    assert StepDistribution.step(4.0).rescale(2.0) == StepDistribution.step(2.0)
