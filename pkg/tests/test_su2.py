import numpy as np
import pytest

from qdirac import dirac, disc, su2
from qdirac.errors import ParameterError, UnboundedSymbolError

Q = 0.5


def test_relations_under_multiplication_representation():
    for name, r in su2.relation_residuals(Q, 16, 3, margin=4):
        assert r <= 1e-12, name


def test_element_relations():
    K = 20
    a, c = su2.generators(Q, K)
    one = su2.one(Q, K)
    assert su2.distance(a * c, Q * (c * a)) < 1e-15
    assert su2.distance(c * c.star(), c.star() * c) == 0
    assert su2.distance(a.star() * a + c * c.star(), one) < 1e-15
    assert su2.distance(a * a.star() + (Q * Q) * (c * c.star()), one) < 1e-15


def test_modes_and_star():
    a, c = su2.generators(Q, 8)
    assert (a.modes, c.modes, c.star().modes) == ([0], [1], [-1])
    w = a * c * c
    assert w.modes == [2]
    assert su2.distance(w.star().star(), w) == 0
    assert (c ** 3).modes == [3]
    assert (a - a).modes == []


@pytest.mark.parametrize("name, shift", [("a", -1), ("c", -1), ("a*", 1), ("c*", 1)])
def test_grade_shift(name, shift):
    K, M = 8, 2
    a, c = su2.generators(Q, K + 8)
    x = {"a": a, "c": c, "a*": a.star(), "c*": c.star()}[name]
    P = su2.rho_tilde(x).matrix(K, M).tocoo()
    g = dirac.basis_grades(K, M)
    assert set((g[P.row] - g[P.col]).tolist()) == {shift}


def test_rho_tilde_of_unbounded():
    yinv = su2.from_disc(disc.make_generator("y_pow", Q, 8, beta=-1))
    with pytest.raises(UnboundedSymbolError):
        su2.rho_tilde(yinv)


def test_parameter_mismatch():
    a, _ = su2.generators(Q, 8)
    b, _ = su2.generators(Q, 9)
    with pytest.raises(ParameterError):
        a * b
    with pytest.raises(ParameterError):
        a ** -1


def test_spinor_roundtrip():
    v = np.arange(2 * 3 * 16, dtype=complex)
    s = su2.SpinorVector.from_flat(v, Q, 2.0, 4, 1)
    assert np.array_equal(s.flat(), v)
    assert s.norm() > 0


def test_growth_classification():
    Ks = [8, 16, 24]
    assert su2.classify_growth(Ks, [0.0, 0.0, 0.0])["class"] == "zero"
    assert su2.classify_growth(Ks, [3.0, 3.0, 3.0])["class"] == "bounded"
    g = su2.classify_growth(Ks, [2.0 ** k for k in Ks])
    assert g["class"] == "growing" and g["rate"] == pytest.approx(2.0)
    assert su2.classify_growth(Ks, [0.5 ** k for k in Ks])["class"] == "decaying"


def test_derivative_norm_report_for_a():
    a, _ = su2.generators(Q, 24)
    rep = su2.gamma1_report(a, sweep=(8, 16), M=2)
    fits = rep["growth"]
    assert fits["phi.E.collapsed"]["class"] == "zero"
    assert fits["phi.H.collapsed"]["class"] == "bounded"
    # the two-sided operator grows with the truncation
    assert fits["phi.H.two_sided"]["class"] == "growing"
