import random
from fractions import Fraction

import pytest

from infeq.atiyah import check_cocycle
from infeq.formal_core import Poly, Scalar
from infeq.obstruction_p1 import (
    CechP1Model,
    LaurentPoly,
    LocalLineData,
    apply_split,
    gauge_chart,
    mismatch,
    obstruction,
    obstruction_closed_form,
    split_cocycle,
    transport,
)

DEGREES = range(-3, 4)
RHOS = [Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)]


def lp(*pairs):
    return LaurentPoly(dict(pairs))


def local_operator(f, rho, a, s):
    """``f s' + rho f' s + a f s`` for Laurent data in one variable."""
    return f * s.derivative() + (f.derivative() * s) * rho + a * f * s


def test_laurent_arithmetic():
    p = lp((-1, 2), (3, 1))
    assert p.residue() == Scalar(2)
    assert p.derivative() == lp((-2, -2), (2, 3))
    assert p.invert_variable() == lp((1, 2), (-3, 1))
    assert p.shift(2) == lp((1, 2), (5, 1))
    assert (p - p) == LaurentPoly()
    with pytest.raises(ValueError):
        p.to_poly()


def test_transport_matches_chain_rule():
    """Chart-1 operator rewritten in ``z`` and the chart-0 frame, computed by substitution."""
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(-3, 3)
        rho = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        a1 = Poly(1, {(k,): rng.randint(-3, 3) for k in range(rng.randint(0, 3))})
        f = LaurentPoly({k: rng.randint(-3, 3) for k in range(0, 4)})
        s0 = LaurentPoly({k: rng.randint(-3, 3) for k in range(-2, 3)})
        # functions of w = 1/z, written as Laurent polynomials in w
        g_w = LaurentPoly({2 - e: -c for e, c in f.terms.items()})
        s1_w = LaurentPoly({n - e: c for e, c in s0.terms.items()})
        out_w = local_operator(g_w, rho, LaurentPoly.from_poly(a1), s1_w)
        out_z = LaurentPoly({n - e: c for e, c in out_w.terms.items()})
        rho_t, a_t = transport(LocalLineData(1, rho, a1), n)
        assert rho_t == Scalar(rho)
        assert local_operator(f, rho, a_t, s0) == out_z


@pytest.mark.parametrize("n", DEGREES)
@pytest.mark.parametrize("rho", RHOS)
def test_obstruction_closed_form(n, rho):
    assert obstruction(CechP1Model.standard(n, rho)) == obstruction_closed_form(n, rho) == Scalar(n + 2 * rho)


def test_obstruction_is_exactly_linear():
    value = {(n, rho): obstruction(CechP1Model.standard(n, rho)) for n in DEGREES for rho in RHOS}
    c = value[(0, Fraction(0))]
    alpha = value[(1, Fraction(0))] - c
    beta = value[(0, Fraction(1))] - c
    for (n, rho), v in value.items():
        assert v == c + alpha * n + beta * rho


def test_obstruction_zeros_and_nonzeros():
    assert not obstruction(CechP1Model.standard(-2, 1))
    assert not obstruction(CechP1Model.standard(2, -1))
    assert not obstruction(CechP1Model.standard(0, 0))
    for n in (1, -1, 2, -2):
        assert obstruction(CechP1Model.standard(n, 0))


@pytest.mark.parametrize("n", DEGREES)
@pytest.mark.parametrize("rho", RHOS)
def test_split_iff_unobstructed(n, rho):
    model = CechP1Model.standard(n, rho)
    split = split_cocycle(model)
    if obstruction(model):
        assert split is None
    else:
        assert split is not None
        assert mismatch(apply_split(model, split)) == LaurentPoly()


def test_split_with_local_data():
    a0 = Poly(1, {(0,): 1, (2,): -3})
    a1 = Poly(1, {(1,): 5})
    model = CechP1Model.standard(-2, 1, a0, a1)
    c0, c1 = split_cocycle(model)
    glued = apply_split(model, (c0, c1))
    assert mismatch(glued) == LaurentPoly()
    assert split_cocycle(CechP1Model.standard(1, 0, a0, a1)) is None


def test_obstruction_is_gauge_invariant():
    rng = random.Random(9)
    for _ in range(10):
        n, rho = rng.randint(-3, 3), rng.choice(RHOS)
        model = CechP1Model.standard(n, rho, Poly(1, {(1,): rng.randint(-2, 2)}))
        u = Poly(1, {(0,): 1, (1,): rng.randint(-3, 3), (2,): rng.randint(-3, 3)})
        moved0 = gauge_chart(model.chart0, u, 4)
        moved1 = gauge_chart(model.chart1, u, 4)
        assert obstruction(CechP1Model(n, moved0, model.chart1)) == obstruction(model)
        assert obstruction(CechP1Model(n, model.chart0, moved1)) == obstruction(model)


def test_gauge_chart_example():
    data = LocalLineData(0, 0, Poly.zero(1))
    moved = gauge_chart(data, Poly(1, {(0,): 1, (1,): 2}), 4)
    assert moved.a == Poly(1, {(0,): -2, (1,): 4, (2,): -8, (3,): 16, (4,): -32})
    assert moved.rho == Scalar(0)
    with pytest.raises(ValueError):
        gauge_chart(data, Poly(1, {(0,): 2}), 3)


def test_local_data_is_a_lie_map():
    for rho in RHOS:
        L = LocalLineData(0, rho, Poly(1, {(0,): 1, (3,): 2})).liemap()
        assert check_cocycle(L)["holds"]


def test_model_errors():
    with pytest.raises(ValueError):
        mismatch(CechP1Model(0, LocalLineData(0, 1, Poly.zero(1)), LocalLineData(1, 0, Poly.zero(1))))
    with pytest.raises(ValueError):
        CechP1Model(0, LocalLineData(1, 0, Poly.zero(1)), LocalLineData(1, 0, Poly.zero(1)))
    with pytest.raises(ValueError):
        LocalLineData(2, 0, Poly.zero(1))
