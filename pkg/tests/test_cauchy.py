
import pytest

from qfix.cauchy import (
    ObjectSequence,
    cauchy_degree,
    check_cauchy_adjoint_equivalence,
    is_cauchy,
    phi_of,
    psi_of,
)
from qfix.instances import make_metric_space, make_ordered_set
from qfix.qcat import QCategory
from qfix.quantale import LawvereQuantale

L = LawvereQuantale()
TRI = make_metric_space("abc", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
LINE = QCategory.from_rule(L, lambda x, y: abs(x - y), probes=[0.0, 0.5, 1.0], search_hint=[0.0, 1.0], name="R")


def test_constant_sequence():
    seq = ObjectSequence.constant(TRI, "b")
    ok, est = is_cauchy(seq)
    assert ok and est.stabilized and est.value == 0.0
    phi, psi = phi_of(seq), psi_of(seq)
    assert [r[0] for r in phi.matrix] == [TRI.hom(y, "b") for y in "abc"]
    assert list(psi.matrix[0]) == [TRI.hom("b", y) for y in "abc"]
    rep = check_cauchy_adjoint_equivalence(seq)
    assert rep.passed and rep.data["cauchy"] and rep.data["adjoint"]


def test_geometric_sequence_on_line():
    seq = ObjectSequence(LINE, lambda n: 2.0 ** -n, name="2^-n")
    est = cauchy_degree(seq, 64)
    assert est.value == pytest.approx(0.0, abs=1e-9)
    phi = phi_of(seq, 64)
    assert phi.matrix[0][0] == pytest.approx(0.0, abs=1e-9)
    assert phi.matrix[1][0] == pytest.approx(1.0, abs=1e-9)


def test_alternating_sequence_is_not_cauchy():
    two = make_metric_space("ab", [[0, 1], [1, 0]])
    seq = ObjectSequence.eventually_periodic(two, [], ["a", "b"])
    ok, est = is_cauchy(seq)
    assert not ok and est.value == 1.0 and est.stabilized
    rep = check_cauchy_adjoint_equivalence(seq)
    assert rep.passed  # the two tests agree
    assert not rep.data["cauchy"] and not rep.data["adjoint"]
    assert rep.data["unit_defect"] is not None


def test_eventually_constant_in_ordered_set():
    P = make_ordered_set([[1, 1, 1], [0, 1, 1], [0, 0, 1]], "abc")
    seq = ObjectSequence.eventually_periodic(P, ["a", "c"], ["b"])
    phi = phi_of(seq)
    assert [r[0] for r in phi.matrix] == [1, 1, 0]


def test_estimate_exact_past_stabilization():
    seq = ObjectSequence.eventually_periodic(TRI, ["a", "c", "a"], ["b"])
    values = {cauchy_degree(seq, h).value for h in (8, 16, 64, 128)}
    assert values == {0.0}


def test_geometric_cauchy_on_finite_net():
    pts = [0.0, 0.125, 0.25, 0.5, 1.0]
    net = make_metric_space(pts, lambda x, y: abs(x - y))
    seq = ObjectSequence.eventually_periodic(net, [1.0, 0.5, 0.25, 0.125], [0.0])
    rep = check_cauchy_adjoint_equivalence(seq)
    assert rep.passed and rep.data["cauchy"] and rep.data["adjoint"]


def test_short_horizon_rejected():
    with pytest.raises(ValueError):
        cauchy_degree(ObjectSequence.constant(TRI, "a"), 1)
