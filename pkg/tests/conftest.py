import random
import sys
from fractions import Fraction

import pytest

from infeq.formal_core import Poly, Scalar, VectorField
from infeq.linalg import Matrix


def random_scalar(rng, complex_prob=0.2):
    re = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < complex_prob else 0
    return Scalar(re, im)


def random_poly(rng, d, max_deg, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        w = rng.randint(0, max_deg)
        idx = [0] * d
        for _ in range(w):
            idx[rng.randrange(d)] += 1
        terms[tuple(idx)] = random_scalar(rng)
    return Poly(d, terms)


def random_field(rng, d, max_deg, max_terms=3):
    return VectorField(random_poly(rng, d, max_deg, max_terms) for _ in range(d))


def random_invertible(rng, r):
    while True:
        m = Matrix([[random_scalar(rng, 0.3) for _ in range(r)] for _ in range(r)])
        try:
            m.inverse()
            return m
        except ZeroDivisionError:
            continue


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.report_lines():
        terminalreporter.write_line(line)
