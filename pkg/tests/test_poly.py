"""Polynomial core: monomial indexing, ring arithmetic, truncated exp."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlab.poly import (
    GF,
    RR,
    DenseForm,
    evaluate,
    monomial_count,
    monomial_rank,
    monomial_unrank,
    monomials,
    multiply,
    truncated_exp,
)


def random_form(rng, n, d, denom=4):
    coeffs = [
        Fraction(int(a), int(b))
        for a, b in zip(
            rng.integers(-9, 10, monomial_count(n, d)),
            rng.integers(1, denom + 1, monomial_count(n, d)),
        )
    ]
    return DenseForm.from_coeffs(n, d, coeffs)


# ---------------------------------------------------------------------------
# Monomial indexing


def test_monomial_count_examples():
    assert monomial_count(3, 6) == 28
    assert monomial_count(1, 5) == 1
    assert monomial_count(4, 0) == 1


def test_rank_of_first_variable_power_is_zero():
    for n in range(1, 7):
        for d in range(0, 7):
            e = (d,) + (0,) * (n - 1)
            assert monomial_rank(e) == 0


def test_rank_unrank_roundtrip_random():
    rng = np.random.default_rng(5)
    n, d = 5, 6
    for _ in range(1000):
        cuts = rng.integers(0, n, d)
        e = [0] * n
        for c in cuts:
            e[c] += 1
        r = monomial_rank(e)
        assert monomial_unrank(r, n, d) == tuple(e)


def test_rank_enumeration_matches_colex_iteration():
    # exhaustive over a block of small shapes, plus a few wide/deep ones
    shapes = [(n, d) for n in range(1, 7) for d in range(0, 7)]
    shapes += [(8, 4), (12, 3), (3, 12)]
    for n, d in shapes:
        for idx, e in enumerate(monomials(n, d)):
            assert monomial_rank(e) == idx
            assert monomial_unrank(idx, n, d) == e


@settings(max_examples=120, deadline=None)
@given(
    n=st.integers(1, 6),
    d=st.integers(0, 7),
    data=st.data(),
)
def test_rank_unrank_bijection_property(n, d, data):
    idx = data.draw(st.integers(0, monomial_count(n, d) - 1))
    e = monomial_unrank(idx, n, d)
    assert sum(e) == d and len(e) == n
    assert monomial_rank(e) == idx


def test_rank_validation_errors():
    with pytest.raises(ValueError):
        monomial_rank((1, 2), n=3)
    with pytest.raises(ValueError):
        monomial_rank((1, 2, 0), d=4)
    with pytest.raises(IndexError):
        monomial_unrank(monomial_count(3, 4), 3, 4)


# ---------------------------------------------------------------------------
# Multiplication


def test_x1_times_x1():
    x1 = DenseForm.variable(2, 0)
    sq = multiply(x1, x1)
    assert sq.coefficient((2, 0)) == 1
    assert sum(1 for c in sq.coeffs if c) == 1


def test_multiply_commutes_on_random_rationals():
    rng = np.random.default_rng(7)
    for _ in range(5):
        f = random_form(rng, 4, 2)
        g = random_form(rng, 4, 4)
        assert multiply(f, g) == multiply(g, f)


def test_multiply_distributes():
    rng = np.random.default_rng(11)
    f = random_form(rng, 3, 2)
    g = random_form(rng, 3, 2)
    h = random_form(rng, 3, 3)
    assert multiply(f + g, h) == multiply(f, h) + multiply(g, h)


def test_multiply_agrees_with_evaluation():
    rng = np.random.default_rng(13)
    f = random_form(rng, 3, 2)
    g = random_form(rng, 3, 3)
    point = [Fraction(2), Fraction(-1, 3), Fraction(5, 2)]
    assert evaluate(multiply(f, g), point) == evaluate(f, point) * evaluate(g, point)


def test_degree6_tangent_identity_expands():
    # l*(l^5 + 10 q l^3 + 15 q^2 l) + 5 q*(l^4 + 6 q l^2 + 3 q^2)
    #   == l^6 + 15 q l^4 + 45 q^2 l^2 + 15 q^3
    rng = np.random.default_rng(17)
    for _ in range(3):
        ell = random_form(rng, 3, 1)
        q = random_form(rng, 3, 2)
        def pw(f, k):
            out = DenseForm.from_coeffs(f.n, 0, [1])
            for _ in range(k):
                out = multiply(out, f)
            return out
        lhs = multiply(ell, pw(ell, 5) + multiply(q, pw(ell, 3)).scale(10)
                       + multiply(pw(q, 2), ell).scale(15))
        lhs = lhs + multiply(q.scale(5), pw(ell, 4) + multiply(q, pw(ell, 2)).scale(6)
                             + pw(q, 2).scale(3))
        rhs = pw(ell, 6) + multiply(q, pw(ell, 4)).scale(15) \
            + multiply(pw(q, 2), pw(ell, 2)).scale(45) + pw(q, 3).scale(15)
        assert lhs == rhs


def test_ring_mismatch_rejected():
    f = DenseForm.from_coeffs(2, 1, [1, 2])
    g = DenseForm.from_coeffs(2, 1, [1, 2], ring=GF(101))
    with pytest.raises(ValueError):
        multiply(f, g)


def test_prime_field_arithmetic_is_exact():
    ring = GF(2147482951)
    f = DenseForm.from_coeffs(2, 1, [ring.p - 1, 5], ring=ring)
    g = f + f - f
    assert g == f
    assert multiply(f, f).coefficient((2, 0)) == 1  # (-1)^2


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        GF(91)


# ---------------------------------------------------------------------------
# Truncated exponential


def test_truncated_exp_single_linear_part():
    ell = DenseForm.from_coeffs(2, 1, [1, 2])
    cubed = truncated_exp([ell], 3)
    expected = multiply(multiply(ell, ell), ell).scale(Fraction(1, 6))
    assert cubed == expected


def test_truncated_exp_of_zero_part():
    z = DenseForm.zero(3, 1)
    for d in (1, 2, 5):
        assert truncated_exp([z], d).is_zero()


def test_truncated_exp_rejects_float_ring():
    ell = DenseForm.from_coeffs(2, 1, [1.0, 2.0], ring=RR)
    with pytest.raises(ValueError):
        truncated_exp([ell], 3)


def test_truncated_exp_merges_equal_degrees():
    a = DenseForm.from_coeffs(2, 1, [1, 0])
    b = DenseForm.from_coeffs(2, 1, [0, 1])
    assert truncated_exp([a, b], 2) == truncated_exp([a + b], 2)


def test_truncated_exp_degree_zero_part_rejected():
    const = DenseForm.from_coeffs(2, 0, [1])
    with pytest.raises(ValueError):
        truncated_exp([const], 2)
