import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infeq.formal_core import (
    Poly,
    Scalar,
    TruncatedSeries,
    VectorField,
    circle_weight,
    euler_field,
    index_factorial,
    indices_up_to,
    poly_arith,
    series_inverse,
    vf_bracket,
    weight,
    weight_components,
)

from conftest import random_field, random_poly

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)
scalars = st.builds(Scalar, fractions, fractions)


def z(d, j):
    return Poly.var(d, j)


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Scalar(0)
    if a:
        assert a * a.inverse() == Scalar(1)


@given(fractions, fractions)
def test_scalar_lowest_terms(re, im):
    s = Scalar(re, im)
    assert s.re.denominator > 0 and s.im.denominator > 0
    assert s.re == re and s.im == im


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        Scalar.coerce(0.5)


def test_multi_index_weight_and_factorial():
    assert weight((2, 0, 3)) == 5
    assert index_factorial((2, 0, 3)) == 12
    assert circle_weight((1, 1)) == 1


def test_poly_examples():
    assert poly_arith(z(2, 0), z(2, 1), "mul") == Poly.monomial((1, 1))
    one_plus_z = Poly.const(1, 1) + z(1, 0)
    assert one_plus_z * one_plus_z == Poly(1, {(0,): 1, (1,): 2, (2,): 1})
    p = Poly.monomial((2, 1))
    assert poly_arith(p, which="partial", j=0) == Poly.monomial((1, 1), 2)
    assert poly_arith(one_plus_z, which="eval_at_0") == 1


def test_poly_dimension_mismatch():
    with pytest.raises(ValueError):
        z(1, 0) + z(2, 0)
    with pytest.raises(ValueError):
        z(2, 0).partial(2)


def test_poly_canonical_no_zero_coefficients():
    p = Poly(1, {(1,): 1}) - Poly(1, {(1,): 1})
    assert p.terms == {}
    assert Poly(2, {(0, 0): 0, (1, 0): 3}).terms == {(1, 0): Scalar(3)}


def test_poly_ring_axioms_fuzz():
    rng = random.Random(7)
    for _ in range(100):
        d = rng.randint(1, 3)
        p, q, r = (random_poly(rng, d, 3) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p * q == q * p
        for out in (p * q, p + q, p - q, p.partial(0)):
            assert all(c for c in out.terms.values())


def test_series_inverse_examples():
    s = TruncatedSeries(Poly(1, {(0,): 1, (1,): 1}), 3)
    assert series_inverse(s).poly == Poly(1, {(0,): 1, (1,): -1, (2,): 1, (3,): -1})
    assert series_inverse(TruncatedSeries(Poly.const(1, 2), 4)).poly == Poly.const(1, Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        series_inverse(TruncatedSeries(z(1, 0), 3))


def test_series_inverse_property():
    rng = random.Random(11)
    for _ in range(40):
        d = rng.randint(1, 2)
        p = random_poly(rng, d, 3) + Poly.const(d, rng.randint(1, 4))
        if not p.eval_at_0():
            continue
        cutoff = rng.randint(0, 5)
        s = TruncatedSeries(p, cutoff)
        prod = s * series_inverse(s)
        assert prod.poly == Poly.const(d, 1)
        assert prod.cutoff == cutoff


def test_series_cutoff_is_min():
    a = TruncatedSeries(Poly(1, {(k,): 1 for k in range(6)}), 5)
    b = TruncatedSeries(Poly(1, {(k,): 1 for k in range(3)}), 2)
    assert (a * b).cutoff == 2
    assert (a + b).cutoff == 2
    assert all(weight(i) <= 2 for i in (a * b).terms)


def test_bracket_examples():
    d = VectorField.monomial((0,), 0)
    z2d = VectorField.monomial((2,), 0)
    assert vf_bracket(d, z2d) == VectorField.monomial((1,), 0, 2)
    for m in range(-1, 4):
        for n in range(-1, 4):
            lhs = vf_bracket(VectorField.monomial((m + 1,), 0), VectorField.monomial((n + 1,), 0))
            expected = VectorField.monomial((m + n + 1,), 0, n - m) if m + n + 1 >= 0 else VectorField.zero(1)
            assert lhs == expected


def test_euler_field():
    assert euler_field(1) == VectorField.monomial((1,), 0)
    assert euler_field(2) == VectorField.monomial((1, 0), 0) + VectorField.monomial((0, 1), 1)
    for d in (1, 2, 3):
        for j in range(d):
            dj = VectorField.coordinate(d, j)
            assert vf_bracket(euler_field(d), dj) == -dj


def test_grading_on_monomials():
    for d in (1, 2, 3):
        nu = euler_field(d)
        for I in indices_up_to(d, 4):
            for j in range(d):
                m = VectorField.monomial(I, j)
                assert vf_bracket(nu, m) == m.scale(weight(I) - 1)


def test_weight_components():
    zd = VectorField.monomial((1,), 0)
    assert weight_components(zd) == {0: zd}
    x = VectorField.monomial((0,), 0) + VectorField.monomial((3,), 0)
    comps = weight_components(x)
    assert comps == {-1: VectorField.monomial((0,), 0), 2: VectorField.monomial((3,), 0)}
    assert weight_components(VectorField.zero(2)) == {}


def test_weight_components_are_eigenvectors():
    rng = random.Random(3)
    for _ in range(30):
        d = rng.randint(1, 3)
        x = random_field(rng, d, 4)
        comps = weight_components(x)
        total = VectorField.zero(d)
        for w, part in comps.items():
            assert vf_bracket(euler_field(d), part) == part.scale(w)
            total = total + part
        assert total == x


def _lie_sample(n=200, seed=1234):
    rng = random.Random(seed)
    for _ in range(n):
        d = rng.randint(1, 3)
        yield tuple(random_field(rng, d, 4) for _ in range(3))


def test_jacobi_fuzz():
    count = 0
    for x, y, w in _lie_sample():
        jac = vf_bracket(vf_bracket(x, y), w) + vf_bracket(vf_bracket(y, w), x) + vf_bracket(vf_bracket(w, x), y)
        assert not jac
        count += 1
    assert count >= 200


def test_antisymmetry_fuzz():
    for x, y, _ in _lie_sample():
        assert not (vf_bracket(x, y) + vf_bracket(y, x))


def test_derivation_property():
    rng = random.Random(99)
    for _ in range(100):
        d = rng.randint(1, 3)
        eta = random_field(rng, d, 3)
        f, g = random_poly(rng, d, 3), random_poly(rng, d, 3)
        assert eta.apply(f * g) == eta.apply(f) * g + f * eta.apply(g)
