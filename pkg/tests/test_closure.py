import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiral_minimal.closure import classify, closing_multiple, convergents, rational_approximation


def brute_m_min(r1, r2, limit=10_000):
    """Least even m with m*r1 and m*r2 even integers, by search."""
    for m in range(2, limit, 2):
        if (m * r1).denominator == 1 and (m * r1).numerator % 2 == 0 \
                and (m * r2).denominator == 1 and (m * r2).numerator % 2 == 0:
            return m
    raise AssertionError("no m found")


def test_convergents_of_golden_ratio_are_fibonacci():
    phi = (1 + math.sqrt(5)) / 2
    qs = [q for _, q in zip(range(12), (q for _, q in convergents(phi)))]
    assert qs == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]


def test_rational_approximation_exact():
    assert rational_approximation(0.5, 1e-9, 10_000)[:2] == (1, 2)
    assert rational_approximation(2 / 7, 1e-9, 10_000)[:2] == (2, 7)


def test_rational_approximation_gives_up_at_q_max():
    p, q, depth = rational_approximation(math.sqrt(2) - 1, 1e-9, 10_000)
    assert p is None and depth > 5


def test_half_pi_is_closed_after_four():
    cert = classify(math.pi / 2, -math.pi / 2, 1e-13)
    assert cert.closed and (cert.p, cert.q, cert.m_min) == (1, 2, 4)


def test_large_denominator_is_dense():
    # 1/q with q = 10^6: the convergent that matches lies beyond q_max
    cert = classify(math.pi * (1 / 1_000_003), 0.0, 1e-14)
    assert cert.kind == "dense" and cert.heuristic


def test_quadrature_error_dominates():
    cert = classify(math.pi / 2, math.pi / 2, 1e-3)
    assert cert.kind == "undetermined"


def test_irrational_j2_blocks_closure():
    cert = classify(math.pi / 2, math.pi * (math.sqrt(2) - 1), 1e-14)
    assert cert.kind == "dense" and "J2" in cert.note


@given(
    p1=st.integers(1, 40), q1=st.integers(1, 40),
    p2=st.integers(0, 40), q2=st.integers(1, 40),
)
def test_closing_multiple_matches_search(p1, q1, p2, q2):
    r1, r2 = Fraction(p1, q1), Fraction(p2, q2)
    assert closing_multiple([r1, r2]) == brute_m_min(r1, r2)


@given(p=st.integers(1, 200), q=st.integers(1, 200))
def test_classify_recovers_fraction(p, q):
    f = Fraction(p, q)
    cert = classify(math.pi * p / q, math.pi * p / q, 1e-14)
    assert cert.closed and Fraction(cert.p, cert.q) == f
    assert abs(cert.j1_over_pi - cert.p / cert.q) < cert.rational_tol


def test_certificate_dict_roundtrip():
    d = classify(math.pi / 2, -math.pi / 2, 0.0).to_dict()
    assert d["kind"] == "closed" and d["j2_over_pi"] == [1, 2]


@pytest.mark.parametrize("q_max", [1])
def test_q_max_one(q_max):
    assert classify(math.pi / 3, math.pi / 3, 0.0, q_max=q_max).kind == "dense"
